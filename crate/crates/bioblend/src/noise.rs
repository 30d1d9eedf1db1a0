//! Per-feature interpolation between a visible feature and Gaussian noise.

use ndarray::{Array1, Array2};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::blend::BlendingKind;
use crate::error::{Error, Result};
use crate::rng::RandomStream;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    pub enabled: bool,
    pub mode: BlendingKind,
    pub alpha_min: f64,
    pub alpha_max: f64,
}

impl NoiseSpec {
    pub fn disabled() -> Self {
        NoiseSpec { enabled: false, mode: BlendingKind::Linear, alpha_min: 1.0, alpha_max: 1.0 }
    }

    pub fn validate(&self) -> Result<()> {
        let unit = 0.0..=1.0;
        if !(unit.contains(&self.alpha_min) && unit.contains(&self.alpha_max) && self.alpha_min <= self.alpha_max) {
            return Err(Error::invalid(format!(
                "noise alpha range must satisfy 0 <= min <= max <= 1, got [{}, {}]",
                self.alpha_min, self.alpha_max
            )));
        }
        Ok(())
    }
}

fn moments(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Blends one column with noise. Returns the realized alpha.
fn noisy_column(stream: &mut RandomStream, column: &mut [f64], spec: &NoiseSpec) -> Result<f64> {
    let alpha = spec.alpha_min + (spec.alpha_max - spec.alpha_min) * stream.next_f64();
    if alpha == 1.0 || column.is_empty() {
        return Ok(alpha);
    }
    match spec.mode {
        BlendingKind::Linear => {
            let (mean, sd) = moments(column);
            let noise = stream.draw_normal(mean, sd, column.len())?;
            for (v, n) in column.iter_mut().zip(noise) {
                *v = alpha * *v + (1.0 - alpha) * n;
            }
        }
        BlendingKind::Logarithmic => {
            // Interpolate in log space against noise matched to the log-feature.
            let min = column.iter().copied().fold(f64::INFINITY, f64::min);
            let shift = if min > 0.0 { 0.0 } else { 1.0 - min };
            let logs: Vec<f64> = column.iter().map(|v| (v + shift).ln()).collect();
            let (mean, sd) = moments(&logs);
            let noise = stream.draw_normal(mean, sd, column.len())?;
            for ((v, l), n) in column.iter_mut().zip(&logs).zip(noise) {
                *v = (alpha * l + (1.0 - alpha) * n).exp() - shift;
            }
        }
    }
    Ok(alpha)
}

/// Adds noise to every visible feature, drawing each feature's alpha
/// uniformly from `[alpha_min, alpha_max]`. A disabled spec is the identity
/// with alpha fixed at 1.
pub fn add_noise(stream: &mut RandomStream, values: &Array2<f64>, spec: &NoiseSpec) -> Result<(Array2<f64>, Vec<f64>)> {
    let mut out = values.clone();
    let alpha = add_noise_in_place(stream, &mut out, spec)?;
    Ok((out, alpha))
}

pub fn add_noise_in_place(stream: &mut RandomStream, values: &mut Array2<f64>, spec: &NoiseSpec) -> Result<Vec<f64>> {
    spec.validate()?;
    let n_features = values.ncols();
    if !spec.enabled {
        return Ok(vec![1.0; n_features]);
    }
    let mut streams = stream.fork_many("feature", n_features)?;
    let mut alpha = Vec::with_capacity(n_features);
    const CHUNK: usize = 512;
    for (chunk_idx, chunk_streams) in streams.chunks_mut(CHUNK).enumerate() {
        let first = chunk_idx * CHUNK;
        let results: Vec<(f64, Vec<f64>)> = chunk_streams
            .par_iter_mut()
            .enumerate()
            .map(|(offset, s)| {
                let mut col = values.column(first + offset).to_vec();
                let a = noisy_column(s, &mut col, spec)?;
                Ok((a, col))
            })
            .collect::<Result<_>>()?;
        for (offset, (a, col)) in results.into_iter().enumerate() {
            values.column_mut(first + offset).assign(&Array1::from(col));
            alpha.push(a);
        }
    }
    Ok(alpha)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn signal(seed: u64, rows: usize, cols: usize, positive: bool) -> Array2<f64> {
        let mut s = RandomStream::new(seed);
        let data = s.draw_normal(if positive { 20.0 } else { 0.0 }, 2.0, rows * cols).unwrap();
        Array2::from_shape_vec((rows, cols), data).unwrap()
    }

    fn pearson(a: &[f64], b: &[f64]) -> f64 {
        let (ma, sa) = moments(a);
        let (mb, sb) = moments(b);
        a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)).sum::<f64>() / a.len() as f64 / (sa * sb)
    }

    fn spec(mode: BlendingKind, lo: f64, hi: f64) -> NoiseSpec {
        NoiseSpec { enabled: true, mode, alpha_min: lo, alpha_max: hi }
    }

    #[test]
    fn alpha_one_is_identity() {
        let v = signal(1, 100, 8, false);
        for mode in [BlendingKind::Linear, BlendingKind::Logarithmic] {
            let (out, alpha) = add_noise(&mut RandomStream::new(2), &v, &spec(mode, 1.0, 1.0)).unwrap();
            assert_eq!(out, v);
            assert_eq!(alpha, vec![1.0; 8]);
        }
    }

    #[test]
    fn disabled_is_identity() {
        let v = signal(1, 10, 3, false);
        let (out, alpha) = add_noise(&mut RandomStream::new(2), &v, &NoiseSpec::disabled()).unwrap();
        assert_eq!(out, v);
        assert_eq!(alpha, vec![1.0; 3]);
    }

    #[test]
    fn alpha_zero_blocks_the_signal() {
        let v = signal(3, 10_000, 3, true);
        for mode in [BlendingKind::Linear, BlendingKind::Logarithmic] {
            let (out, _) = add_noise(&mut RandomStream::new(4), &v, &spec(mode, 0.0, 0.0)).unwrap();
            for j in 0..3 {
                let r = pearson(&v.column(j).to_vec(), &out.column(j).to_vec());
                // Null standard error is 0.01.
                assert!(r.abs() < 0.05, "{mode}: r = {r}");
            }
        }
    }

    #[test]
    fn half_alpha_shrinks_std_by_sqrt_two() {
        let v = signal(5, 10_000, 4, false);
        let (out, _) = add_noise(&mut RandomStream::new(6), &v, &spec(BlendingKind::Linear, 0.5, 0.5)).unwrap();
        for j in 0..4 {
            let (m_in, sd_in) = moments(&v.column(j).to_vec());
            let (m_out, sd_out) = moments(&out.column(j).to_vec());
            let expected = sd_in / 2f64.sqrt();
            assert!((sd_out - expected).abs() / expected < 0.05, "{sd_out} vs {expected}");
            // Mean is preserved: 3 standard errors of sd_out / sqrt(S).
            assert!((m_out - m_in).abs() < 3.0 * sd_out / 100.0);
        }
    }

    #[test]
    fn alpha_range_is_respected() {
        let v = signal(7, 20, 300, false);
        let (_, alpha) = add_noise(&mut RandomStream::new(8), &v, &spec(BlendingKind::Linear, 0.2, 0.6)).unwrap();
        assert!(alpha.iter().all(|a| (0.2..0.6).contains(a)));
    }

    #[test]
    fn logarithmic_noise_handles_nonpositive_columns() {
        let v = signal(9, 50, 2, false);
        let (out, _) = add_noise(&mut RandomStream::new(1), &v, &spec(BlendingKind::Logarithmic, 0.3, 0.7)).unwrap();
        assert!(out.iter().all(|x| x.is_finite()));
    }

    #[test]
    fn invalid_alpha_range() {
        let v = signal(1, 4, 1, false);
        assert!(add_noise(&mut RandomStream::new(1), &v, &spec(BlendingKind::Linear, 0.7, 0.3)).is_err());
        assert!(add_noise(&mut RandomStream::new(1), &v, &spec(BlendingKind::Linear, -0.1, 0.3)).is_err());
    }

    #[test]
    fn deterministic() {
        let v = signal(1, 30, 5, false);
        let a = add_noise(&mut RandomStream::new(3), &v, &spec(BlendingKind::Linear, 0.0, 1.0)).unwrap();
        let b = add_noise(&mut RandomStream::new(3), &v, &spec(BlendingKind::Linear, 0.0, 1.0)).unwrap();
        assert_eq!(a, b);
    }
}
