//! Generator configuration: raw `key = value` settings, defaults, and
//! validation that reports every violation at once.
//!
//! Keys are the command-line flag names without the leading dashes, so
//! the same table backs `--n-labels 100` and a `n-labels = 100` line in a
//! settings file.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::blend::{BlendingKind, PositivityKind};
use crate::error::{Error, Result};
use crate::location::{DistributionKind, Envelope, SchemeKind, UsefulnessScheme};
use crate::noise::NoiseSpec;
use crate::polynomial::count_transitional;
use crate::sampler::SamplerSpec;

/// Every accepted key with its default and a one-line description.
pub const KEYS: &[(&str, &str, &str)] = &[
    ("n-labels", "100", "number of classes C (at least 2)"),
    ("n-samples-per-label", "16", "samples drawn per class"),
    ("n-true-features", "40", "hidden features carrying class information"),
    ("n-fake-features", "160", "hidden features of pure noise"),
    ("average-consecutive-locations", "2", "ordering extent: mean length of sorted runs of class locations, 0..=C"),
    ("average-shared-locations", "3", "sharing extent: mean number of classes sharing a location, 0..=C"),
    ("n-features-out", "10000", "number of visible features"),
    ("blending-mode", "linear", "linear | logarithmic"),
    ("log-positivity", "exponential", "operands of the logarithmic blend: exponential (exp of each value) | shift (value - min + 1)"),
    ("usefulness-scheme", "linear", "linear | exponential | longtailed"),
    ("usefulness-min", "0.2", "usefulness of the least useful true feature, in (0, 1]"),
    ("usefulness-max", "1.0", "usefulness of the most useful true feature, in (0, 1]"),
    ("sampling-distribution", "normal", "distribution of hidden values around a location: normal | uniform"),
    ("envelope", "normal", "distribution the class locations are drawn from: normal | uniform"),
    ("envelope-location", "0.0", "envelope mean (normal) or range start (uniform)"),
    ("envelope-scale", "1.0", "envelope std (normal) or range length (uniform)"),
    ("scale-jitter", "0.1", "half-width of the uniform multiplier around 1 on true-feature scales, in [0, 1)"),
    ("fake-scale", "2 x envelope-scale", "sampling scale of fake features and cap for weak true features"),
    ("polynomial-degree", "2", "maximum monomial degree d"),
    ("blend-k-min", "2", "fewest transitional features blended into one visible feature"),
    ("blend-k-max", "4", "most transitional features blended into one visible feature"),
    ("dirichlet-concentration", "1.0", "symmetric Dirichlet concentration of the blend weights"),
    ("noise", "true", "add per-feature noise: true | false"),
    ("noise-mode", "blending-mode", "interpolation of signal and noise: linear | logarithmic"),
    ("noise-alpha-min", "0.0", "lower bound of the per-feature signal weight alpha"),
    ("noise-alpha-max", "1.0", "upper bound of the per-feature signal weight alpha"),
    ("seed", "0", "64-bit seed; falls back to BIOBLEND_SEED"),
    ("output", "bioblend.h5", "HDF5 output path"),
    ("store-hidden", "false", "also store the hidden feature matrix"),
    ("threads", "all cores", "worker threads; results do not depend on it"),
];

/// Unvalidated settings keyed by flag name.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RawConfig {
    entries: BTreeMap<String, String>,
}

impl RawConfig {
    pub fn new() -> Self {
        Self::default()
    }

    /// Sets `key`, replacing any earlier value. Dashes or underscores are accepted.
    pub fn set(&mut self, key: &str, value: impl Into<String>) -> &mut Self {
        let key = key.trim().trim_start_matches("--").replace('_', "-");
        self.entries.insert(key, value.into().trim().to_owned());
        self
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.set(key, value.to_string());
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    pub fn contains(&self, key: &str) -> bool {
        self.entries.contains_key(key)
    }

    /// Overlays `other` on top of `self`.
    pub fn merge(&mut self, other: &RawConfig) {
        for (k, v) in &other.entries {
            self.entries.insert(k.clone(), v.clone());
        }
    }

    /// Parses `key = value` lines; `#` starts a comment.
    pub fn parse_key_values(text: &str) -> Result<Self> {
        let mut raw = RawConfig::new();
        let mut errors = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            match line.split_once('=') {
                Some((k, v)) if !k.trim().is_empty() => {
                    raw.set(k, v);
                }
                _ => errors.push(format!("line {}: expected `key = value`, got {line:?}", n + 1)),
            }
        }
        if errors.is_empty() {
            Ok(raw)
        } else {
            Err(Error::Config(errors))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    pub n_labels: usize,
    pub n_samples_per_label: usize,
    pub n_true_features: usize,
    pub n_fake_features: usize,
    pub ordering_extent: usize,
    pub sharing_extent: usize,
    pub n_features_out: usize,
    pub blending_mode: BlendingKind,
    pub log_positivity: PositivityKind,
    pub usefulness_scheme: SchemeKind,
    pub usefulness_min: f64,
    pub usefulness_max: f64,
    pub sampling_distribution: DistributionKind,
    pub envelope: Envelope,
    pub scale_jitter: f64,
    pub fake_scale: f64,
    pub polynomial_degree: usize,
    pub blend_k_min: usize,
    pub blend_k_max: usize,
    pub dirichlet_concentration: f64,
    pub noise: NoiseSpec,
    pub seed: u64,
    /// Run settings below are not part of the dataset: they are left out of
    /// stored metadata so the file bytes depend only on what was generated.
    #[serde(skip)]
    pub output_path: PathBuf,
    pub store_hidden: bool,
    #[serde(skip)]
    pub threads: Option<usize>,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        validate_config(&RawConfig::new()).expect("defaults are valid")
    }
}

/// Quantities derived from a configuration, reported by a dry run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Derived {
    pub n_samples: usize,
    pub n_hidden: usize,
    pub n_transitional: usize,
    pub n_visible: usize,
    /// Approximate size of the HDF5 file in bytes.
    pub estimated_output_bytes: u64,
}

impl GeneratorConfig {
    pub fn n_samples(&self) -> usize {
        self.n_labels * self.n_samples_per_label
    }

    pub fn n_hidden(&self) -> usize {
        self.n_true_features + self.n_fake_features
    }

    pub fn n_transitional(&self) -> usize {
        count_transitional(self.n_hidden(), self.polynomial_degree).expect("validated configuration")
    }

    pub fn usefulness(&self) -> UsefulnessScheme {
        UsefulnessScheme { kind: self.usefulness_scheme, min: self.usefulness_min, max: self.usefulness_max }
    }

    pub fn sampler(&self) -> SamplerSpec {
        SamplerSpec {
            distribution: self.sampling_distribution,
            samples_per_class: self.n_samples_per_label,
            scale_jitter: self.scale_jitter,
            fake_scale: self.fake_scale,
        }
    }

    pub fn derived(&self) -> Derived {
        let s = self.n_samples() as u64;
        let mean_k = (self.blend_k_min + self.blend_k_max) as u64 / 2;
        let visible = self.n_features_out as u64;
        let hidden = if self.store_hidden { s * self.n_hidden() as u64 * 8 } else { 0 };
        let bytes = s * visible * 8 + s * 8 + hidden + self.n_hidden() as u64 * 9 + visible * 8
            + visible * mean_k * 16 + (visible + 1) * 8 + 16 * 1024;
        Derived {
            n_samples: self.n_samples(),
            n_hidden: self.n_hidden(),
            n_transitional: self.n_transitional(),
            n_visible: self.n_features_out,
            estimated_output_bytes: bytes,
        }
    }

    /// Flat `(key, value)` view used for file metadata.
    pub fn key_values(&self) -> Vec<(&'static str, ConfigValue)> {
        use ConfigValue::*;
        vec![
            ("n_labels", Int(self.n_labels as i64)),
            ("n_samples_per_label", Int(self.n_samples_per_label as i64)),
            ("n_true_features", Int(self.n_true_features as i64)),
            ("n_fake_features", Int(self.n_fake_features as i64)),
            ("average_consecutive_locations", Int(self.ordering_extent as i64)),
            ("average_shared_locations", Int(self.sharing_extent as i64)),
            ("n_features_out", Int(self.n_features_out as i64)),
            ("blending_mode", Text(self.blending_mode.to_string())),
            ("log_positivity", Text(self.log_positivity.to_string())),
            ("usefulness_scheme", Text(self.usefulness_scheme.to_string())),
            ("usefulness_min", Float(self.usefulness_min)),
            ("usefulness_max", Float(self.usefulness_max)),
            ("sampling_distribution", Text(self.sampling_distribution.to_string())),
            ("envelope", Text(self.envelope.kind.to_string())),
            ("envelope_location", Float(self.envelope.location)),
            ("envelope_scale", Float(self.envelope.scale)),
            ("scale_jitter", Float(self.scale_jitter)),
            ("fake_scale", Float(self.fake_scale)),
            ("polynomial_degree", Int(self.polynomial_degree as i64)),
            ("blend_k_min", Int(self.blend_k_min as i64)),
            ("blend_k_max", Int(self.blend_k_max as i64)),
            ("dirichlet_concentration", Float(self.dirichlet_concentration)),
            ("noise", Int(self.noise.enabled as i64)),
            ("noise_mode", Text(self.noise.mode.to_string())),
            ("noise_alpha_min", Float(self.noise.alpha_min)),
            ("noise_alpha_max", Float(self.noise.alpha_max)),
            ("store_hidden", Int(self.store_hidden as i64)),
        ]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ConfigValue {
    Int(i64),
    Float(f64),
    Text(String),
}

impl std::fmt::Display for ConfigValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ConfigValue::Int(v) => write!(f, "{v}"),
            ConfigValue::Float(v) => write!(f, "{v}"),
            ConfigValue::Text(v) => f.write_str(v),
        }
    }
}

/// Reads typed values out of a [`RawConfig`], recording every failure.
struct Reader<'a> {
    raw: &'a RawConfig,
    errors: Vec<String>,
}

impl Reader<'_> {
    fn parse<T: FromStr>(&mut self, key: &str, default: T) -> T
    where
        T::Err: std::fmt::Display,
    {
        match self.raw.get(key) {
            None => default,
            Some(text) => match text.parse() {
                Ok(v) => v,
                Err(e) => {
                    self.errors.push(format!("{key}: cannot parse {text:?}: {e}"));
                    default
                }
            },
        }
    }

    fn flag(&mut self, key: &str, default: bool) -> bool {
        match self.raw.get(key) {
            None => default,
            Some("" | "true" | "1" | "yes" | "on") => true,
            Some("false" | "0" | "no" | "off") => false,
            Some(other) => {
                self.errors.push(format!("{key}: expected a boolean, got {other:?}"));
                default
            }
        }
    }

    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        if !ok {
            self.errors.push(msg());
        }
    }
}

/// Resolves defaults and validates. Errors list every violation found.
pub fn validate_config(raw: &RawConfig) -> Result<GeneratorConfig> {
    let mut r = Reader { raw, errors: Vec::new() };
    for key in raw.entries.keys() {
        if !KEYS.iter().any(|(k, _, _)| k == key) {
            r.errors.push(format!("unknown setting --{key}"));
        }
    }

    let n_labels: usize = r.parse("n-labels", 100);
    let n_samples_per_label: usize = r.parse("n-samples-per-label", 16);
    let n_true_features: usize = r.parse("n-true-features", 40);
    let n_fake_features: usize = r.parse("n-fake-features", 160);
    let ordering_extent: usize = r.parse("average-consecutive-locations", 2);
    let sharing_extent: usize = r.parse("average-shared-locations", 3);
    let n_features_out: usize = r.parse("n-features-out", 10_000);
    let blending_mode: BlendingKind = r.parse("blending-mode", BlendingKind::Linear);
    let log_positivity: PositivityKind = r.parse("log-positivity", PositivityKind::Exponential);
    let usefulness_scheme: SchemeKind = r.parse("usefulness-scheme", SchemeKind::Linear);
    let usefulness_min: f64 = r.parse("usefulness-min", 0.2);
    let usefulness_max: f64 = r.parse("usefulness-max", 1.0);
    let sampling_distribution: DistributionKind = r.parse("sampling-distribution", DistributionKind::Normal);
    let envelope_kind: DistributionKind = r.parse("envelope", DistributionKind::Normal);
    let envelope_location: f64 = r.parse("envelope-location", 0.0);
    let envelope_scale: f64 = r.parse("envelope-scale", 1.0);
    let scale_jitter: f64 = r.parse("scale-jitter", 0.1);
    let fake_scale: f64 = r.parse("fake-scale", 2.0 * envelope_scale);
    let polynomial_degree: usize = r.parse("polynomial-degree", 2);
    let blend_k_min: usize = r.parse("blend-k-min", 2);
    let blend_k_max: usize = r.parse("blend-k-max", 4);
    let dirichlet_concentration: f64 = r.parse("dirichlet-concentration", 1.0);
    let noise_enabled = r.flag("noise", true);
    let noise_mode: BlendingKind = r.parse("noise-mode", blending_mode);
    let alpha_min: f64 = r.parse("noise-alpha-min", 0.0);
    let alpha_max: f64 = r.parse("noise-alpha-max", 1.0);
    let seed: u64 = r.parse("seed", 0);
    let output_path: PathBuf = r.parse("output", PathBuf::from("bioblend.h5"));
    let store_hidden = r.flag("store-hidden", false);
    let threads: Option<usize> = raw.get("threads").map(|_| r.parse("threads", 1));

    r.check(n_labels >= 2, || format!("n-labels must be ≥ 2, got {n_labels}"));
    r.check(n_samples_per_label >= 1, || "n-samples-per-label must be ≥ 1".into());
    r.check(n_true_features >= 1, || "n-true-features must be ≥ 1".into());
    r.check(n_features_out >= 1, || "n-features-out must be ≥ 1".into());
    r.check(ordering_extent <= n_labels, || {
        format!("average-consecutive-locations must lie in [0, {n_labels}], got {ordering_extent}")
    });
    r.check(sharing_extent <= n_labels, || {
        format!("average-shared-locations must lie in [0, {n_labels}], got {sharing_extent}")
    });
    r.check(usefulness_min > 0.0 && usefulness_min <= 1.0, || {
        format!("usefulness-min must lie in (0, 1], got {usefulness_min}")
    });
    r.check(usefulness_max > 0.0 && usefulness_max <= 1.0, || {
        format!("usefulness-max must lie in (0, 1], got {usefulness_max}")
    });
    r.check(usefulness_min <= usefulness_max, || {
        format!("usefulness-min ({usefulness_min}) exceeds usefulness-max ({usefulness_max})")
    });
    r.check(envelope_location.is_finite(), || "envelope-location must be finite".into());
    r.check(envelope_scale > 0.0 && envelope_scale.is_finite(), || {
        format!("envelope-scale must be positive, got {envelope_scale}")
    });
    r.check((0.0..1.0).contains(&scale_jitter), || format!("scale-jitter must lie in [0, 1), got {scale_jitter}"));
    r.check(fake_scale > 0.0 && fake_scale.is_finite(), || format!("fake-scale must be positive, got {fake_scale}"));
    r.check(polynomial_degree >= 1, || "polynomial-degree must be ≥ 1".into());
    r.check(dirichlet_concentration > 0.0 && dirichlet_concentration.is_finite(), || {
        format!("dirichlet-concentration must be positive, got {dirichlet_concentration}")
    });
    r.check(blend_k_min >= 1 && blend_k_min <= blend_k_max, || {
        format!("blend counts need 1 ≤ blend-k-min ≤ blend-k-max, got [{blend_k_min}, {blend_k_max}]")
    });
    let n_hidden = n_true_features + n_fake_features;
    if n_hidden >= 1 && polynomial_degree >= 1 {
        match count_transitional(n_hidden, polynomial_degree) {
            Ok(n_trans) => r.check(blend_k_max <= n_trans, || {
                format!("blend-k-max ({blend_k_max}) exceeds the {n_trans} transitional features")
            }),
            Err(e) => r.errors.push(format!("polynomial-degree: {e}")),
        }
    }
    for (key, a) in [("noise-alpha-min", alpha_min), ("noise-alpha-max", alpha_max)] {
        r.check((0.0..=1.0).contains(&a), || format!("{key} must lie in [0, 1], got {a}"));
    }
    r.check(alpha_min <= alpha_max, || format!("noise-alpha-min ({alpha_min}) exceeds noise-alpha-max ({alpha_max})"));
    if let Some(t) = threads {
        r.check(t >= 1, || "threads must be ≥ 1".into());
    }

    if !r.errors.is_empty() {
        return Err(Error::Config(r.errors));
    }
    Ok(GeneratorConfig {
        n_labels,
        n_samples_per_label,
        n_true_features,
        n_fake_features,
        ordering_extent,
        sharing_extent,
        n_features_out,
        blending_mode,
        log_positivity,
        usefulness_scheme,
        usefulness_min,
        usefulness_max,
        sampling_distribution,
        envelope: Envelope { kind: envelope_kind, location: envelope_location, scale: envelope_scale },
        scale_jitter,
        fake_scale,
        polynomial_degree,
        blend_k_min,
        blend_k_max,
        dirichlet_concentration,
        noise: NoiseSpec { enabled: noise_enabled, mode: noise_mode, alpha_min, alpha_max },
        seed,
        output_path,
        store_hidden,
        threads,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn errors(raw: &RawConfig) -> Vec<String> {
        match validate_config(raw) {
            Err(Error::Config(e)) => e,
            other => panic!("expected config errors, got {other:?}"),
        }
    }

    #[test]
    fn defaults_are_valid() {
        let c = validate_config(&RawConfig::new().with("seed", 17)).unwrap();
        assert_eq!(c.seed, 17);
        assert_eq!(c.n_labels, 100);
        assert_eq!(c.n_hidden(), 200);
        assert_eq!(c.fake_scale, 2.0);
        assert_eq!(c.noise.mode, c.blending_mode);
        assert_eq!(c.derived().n_transitional, 20_300);
        assert_eq!(GeneratorConfig { seed: 17, ..GeneratorConfig::default() }, c);
    }

    #[test]
    fn too_few_labels() {
        let e = errors(&RawConfig::new().with("n-labels", 0));
        assert!(e.iter().any(|m| m.contains("n-labels must be ≥ 2")), "{e:?}");
    }

    #[test]
    fn extent_above_label_count() {
        let e = errors(&RawConfig::new().with("n-labels", 100).with("average-shared-locations", 101));
        assert!(e.iter().any(|m| m.starts_with("average-shared-locations")), "{e:?}");
    }

    #[test]
    fn reports_every_violation() {
        let raw = RawConfig::new()
            .with("n-labels", 1)
            .with("blending-mode", "cubic")
            .with("noise-alpha-min", 0.9)
            .with("noise-alpha-max", 0.1)
            .with("bogus-flag", 3);
        let e = errors(&raw);
        assert!(e.len() >= 4, "{e:?}");
        assert!(e.iter().any(|m| m.contains("unknown setting --bogus-flag")));
        assert!(e.iter().any(|m| m.contains("blending-mode")));
    }

    #[test]
    fn blend_support_must_fit_transitional_count() {
        let raw = RawConfig::new()
            .with("n-true-features", 1)
            .with("n-fake-features", 0)
            .with("polynomial-degree", 1)
            .with("blend-k-min", 1)
            .with("blend-k-max", 2);
        let e = errors(&raw);
        assert!(e.iter().any(|m| m.contains("exceeds the 1 transitional")), "{e:?}");
    }

    #[test]
    fn key_value_text() {
        let raw = RawConfig::parse_key_values("# comment\nn_labels = 5\n\n--seed=9 # trailing\n").unwrap();
        assert_eq!(raw.get("n-labels"), Some("5"));
        assert_eq!(raw.get("seed"), Some("9"));
        assert!(RawConfig::parse_key_values("just words").is_err());
    }

    #[test]
    fn flags_and_threads() {
        let c = validate_config(&RawConfig::new().with("store-hidden", "").with("noise", "off").with("threads", 3)).unwrap();
        assert!(c.store_hidden);
        assert!(!c.noise.enabled);
        assert_eq!(c.threads, Some(3));
        assert!(validate_config(&RawConfig::new().with("threads", 0)).is_err());
    }

    #[test]
    fn serde_round_trip_drops_run_settings() {
        let c = validate_config(&RawConfig::new().with("threads", 2).with("output", "x.h5")).unwrap();
        let json = serde_json::to_string(&c).unwrap();
        assert!(!json.contains("x.h5"));
        let back: GeneratorConfig = serde_json::from_str(&json).unwrap();
        assert_eq!(back, GeneratorConfig { output_path: PathBuf::new(), threads: None, ..c });
    }
}
