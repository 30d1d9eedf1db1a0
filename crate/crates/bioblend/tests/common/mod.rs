#![allow(dead_code)]

use bioblend::{validate_config, GeneratorConfig, RawConfig};

/// The small screening benchmark: 20 classes of 16 samples, 8 true and 32
/// fake hidden features, 2000 visible ones.
pub fn desk_raw(seed: u64, mode: &str) -> RawConfig {
    RawConfig::new()
        .with("n-labels", 20)
        .with("n-samples-per-label", 16)
        .with("n-true-features", 8)
        .with("n-fake-features", 32)
        .with("n-features-out", 2000)
        .with("blending-mode", mode)
        .with("seed", seed)
}

pub fn desk(seed: u64, mode: &str) -> GeneratorConfig {
    validate_config(&desk_raw(seed, mode)).unwrap()
}

/// Kolmogorov-Smirnov distance between a sample and a continuous cdf.
pub fn ks_distance(sample: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut xs = sample.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let c = cdf(x);
            (c - i as f64 / n).abs().max(((i + 1) as f64 / n - c).abs())
        })
        .fold(0.0, f64::max)
}

/// Asymptotic KS critical value at significance 0.01.
pub fn ks_critical_01(n: usize) -> f64 {
    1.628 / (n as f64).sqrt()
}
