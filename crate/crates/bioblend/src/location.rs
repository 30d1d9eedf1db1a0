//! Per-class, per-hidden-feature distribution locations.
//!
//! Every true feature gets its own sequence of `C` locations drawn under
//! an envelope. Two integer knobs shape that sequence:
//!
//! * the *sharing extent* is the mean size of the class groups that get
//!   the exact same location, and
//! * the *ordering extent* is the mean length of consecutive runs of
//!   class indices whose locations are sorted ascending.
//!
//! Sharing is applied first, then ordering permutes positions inside each
//! run, which keeps the multiplicity of each shared value intact. An
//! extent of 0 behaves like 1, and an extent of `C` covers every class
//! in a single group or run. Fake features take one envelope draw shared
//! by all classes.

use std::fmt;
use std::str::FromStr;

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::RandomStream;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DistributionKind {
    Normal,
    Uniform,
}

impl DistributionKind {
    /// Draws `n` values; for the uniform law `location` is the range start
    /// and `scale` its length.
    pub fn draw(self, stream: &mut RandomStream, location: f64, scale: f64, n: usize) -> Result<Vec<f64>> {
        match self {
            DistributionKind::Normal => stream.draw_normal(location, scale, n),
            DistributionKind::Uniform => stream.draw_uniform(location, scale, n),
        }
    }
}

impl fmt::Display for DistributionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DistributionKind::Normal => "normal",
            DistributionKind::Uniform => "uniform",
        })
    }
}

impl FromStr for DistributionKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "normal" => Ok(DistributionKind::Normal),
            "uniform" => Ok(DistributionKind::Uniform),
            _ => Err(format!("unknown distribution {s:?} (expected normal or uniform)")),
        }
    }
}

/// The distribution class locations are drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub kind: DistributionKind,
    pub location: f64,
    pub scale: f64,
}

impl Envelope {
    pub fn new(kind: DistributionKind, location: f64, scale: f64) -> Result<Self> {
        if !(scale > 0.0 && scale.is_finite()) || !location.is_finite() {
            return Err(Error::invalid(format!(
                "envelope needs a finite location and positive scale, got ({location}, {scale})"
            )));
        }
        Ok(Envelope { kind, location, scale })
    }

    pub fn standard_normal() -> Self {
        Envelope { kind: DistributionKind::Normal, location: 0.0, scale: 1.0 }
    }

    pub fn unit_uniform() -> Self {
        Envelope { kind: DistributionKind::Uniform, location: 0.0, scale: 1.0 }
    }

    fn draw(&self, stream: &mut RandomStream, n: usize) -> Result<Vec<f64>> {
        self.kind.draw(stream, self.location, self.scale, n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeKind {
    Linear,
    Exponential,
    Longtailed,
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SchemeKind::Linear => "linear",
            SchemeKind::Exponential => "exponential",
            SchemeKind::Longtailed => "longtailed",
        })
    }
}

impl FromStr for SchemeKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "linear" => Ok(SchemeKind::Linear),
            "exponential" => Ok(SchemeKind::Exponential),
            "longtailed" | "long-tailed" => Ok(SchemeKind::Longtailed),
            _ => Err(format!(
                "unknown usefulness scheme {s:?} (expected linear, exponential or longtailed)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UsefulnessScheme {
    pub kind: SchemeKind,
    pub min: f64,
    pub max: f64,
}

impl UsefulnessScheme {
    pub fn new(kind: SchemeKind, min: f64, max: f64) -> Result<Self> {
        if !(min > 0.0 && min <= max && max <= 1.0) {
            return Err(Error::invalid(format!(
                "usefulness bounds must satisfy 0 < min <= max <= 1, got [{min}, {max}]"
            )));
        }
        Ok(UsefulnessScheme { kind, min, max })
    }
}

/// Usefulness of every hidden feature: `f_true` scheme values running from
/// `max` down to `min`, followed by `f_fake` zeros.
pub fn make_usefulness(scheme: &UsefulnessScheme, f_true: usize, f_fake: usize) -> Vec<f64> {
    let UsefulnessScheme { kind, min, max } = *scheme;
    let mut out = Vec::with_capacity(f_true + f_fake);
    if f_true == 1 {
        out.push(max);
    } else if f_true > 1 {
        let last = (f_true - 1) as f64;
        for j in 0..f_true {
            let t = j as f64 / last;
            let u = match kind {
                SchemeKind::Linear => max - (max - min) * t,
                SchemeKind::Exponential => max * (min / max).powf(t),
                SchemeKind::Longtailed => {
                    // (1 + j)^-1, mapped affinely onto [min, max].
                    let decay = 1.0 / (1.0 + j as f64);
                    let floor = 1.0 / f_true as f64;
                    min + (max - min) * (decay - floor) / (1.0 - floor)
                }
            };
            out.push(u);
        }
        // Pin the end points against rounding.
        out[0] = max;
        out[f_true - 1] = min;
    }
    out.resize(f_true + f_fake, 0.0);
    out
}

/// Class locations and usefulness for every hidden feature.
#[derive(Debug, Clone, PartialEq)]
pub struct LocationPlan {
    /// `C x F_hidden`; entry `(k, j)` is the location of class `k` in feature `j`.
    pub locations: Array2<f64>,
    pub usefulness: Vec<f64>,
    pub true_mask: Vec<bool>,
    pub ordering_extent: usize,
    pub sharing_extent: usize,
}

impl LocationPlan {
    pub fn n_classes(&self) -> usize {
        self.locations.nrows()
    }

    pub fn n_hidden(&self) -> usize {
        self.locations.ncols()
    }

    pub fn n_true(&self) -> usize {
        self.true_mask.iter().filter(|&&t| t).count()
    }
}

/// Splits `n` positions into consecutive lengths with the given mean extent.
fn run_lengths(stream: &mut RandomStream, n: usize, extent: usize) -> Vec<usize> {
    if extent >= n {
        return vec![n];
    }
    let mut lengths = Vec::new();
    let mut remaining = n;
    while remaining > 0 {
        let len = stream.draw_run_length(extent.max(1) as f64).min(remaining);
        lengths.push(len);
        remaining -= len;
    }
    lengths
}

fn true_feature_locations(
    stream: &mut RandomStream,
    envelope: &Envelope,
    n_classes: usize,
    ordering_extent: usize,
    sharing_extent: usize,
) -> Result<Vec<f64>> {
    // Sharing: one envelope draw per group, groups scattered over classes.
    let groups = run_lengths(stream, n_classes, sharing_extent);
    let values = envelope.draw(stream, groups.len())?;
    let mut classes: Vec<usize> = (0..n_classes).collect();
    stream.shuffle(&mut classes);
    let mut locs = vec![0.0; n_classes];
    let mut members = classes.into_iter();
    for (&size, &value) in groups.iter().zip(&values) {
        for class in members.by_ref().take(size) {
            locs[class] = value;
        }
    }

    // Ordering: sort inside consecutive runs of class indices.
    let mut start = 0;
    for len in run_lengths(stream, n_classes, ordering_extent) {
        locs[start..start + len].sort_by(f64::total_cmp);
        start += len;
    }
    Ok(locs)
}

/// Draws the location plan. Features `0..f_true` are true features with the
/// usefulness of `scheme`; the remaining `f_fake` are fake.
#[allow(clippy::too_many_arguments)]
pub fn make_locations(
    stream: &mut RandomStream,
    envelope: &Envelope,
    scheme: &UsefulnessScheme,
    n_classes: usize,
    f_true: usize,
    f_fake: usize,
    ordering_extent: usize,
    sharing_extent: usize,
) -> Result<LocationPlan> {
    if n_classes < 2 {
        return Err(Error::invalid(format!("need at least 2 classes, got {n_classes}")));
    }
    if ordering_extent > n_classes || sharing_extent > n_classes {
        return Err(Error::invalid(format!(
            "ordering ({ordering_extent}) and sharing ({sharing_extent}) extents must lie in [0, {n_classes}]"
        )));
    }
    let f_hidden = f_true + f_fake;
    let mut streams = stream.fork_many("feature", f_hidden)?;
    let mut locations = Array2::zeros((n_classes, f_hidden));
    for (j, feature_stream) in streams.iter_mut().enumerate() {
        let column = if j < f_true {
            true_feature_locations(feature_stream, envelope, n_classes, ordering_extent, sharing_extent)?
        } else {
            vec![envelope.draw(feature_stream, 1)?[0]; n_classes]
        };
        locations.column_mut(j).assign(&ndarray::Array1::from(column));
    }
    Ok(LocationPlan {
        locations,
        usefulness: make_usefulness(scheme, f_true, f_fake),
        true_mask: (0..f_hidden).map(|j| j < f_true).collect(),
        ordering_extent,
        sharing_extent,
    })
}
