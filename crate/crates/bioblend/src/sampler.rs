//! Hidden feature values drawn around the class locations.

use ndarray::{Array2, Axis};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::location::{DistributionKind, Envelope, LocationPlan};
use crate::rng::RandomStream;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplerSpec {
    pub distribution: DistributionKind,
    pub samples_per_class: usize,
    /// Half-width of the uniform multiplier around 1 applied to true-feature scales.
    pub scale_jitter: f64,
    /// Scale used for fake features and the cap for weakly useful ones.
    pub fake_scale: f64,
}

impl SamplerSpec {
    pub fn validate(&self) -> Result<()> {
        if self.samples_per_class == 0 {
            return Err(Error::invalid("samples per class must be at least 1"));
        }
        if !(0.0..1.0).contains(&self.scale_jitter) {
            return Err(Error::invalid(format!("scale jitter must lie in [0, 1), got {}", self.scale_jitter)));
        }
        if !(self.fake_scale > 0.0 && self.fake_scale.is_finite()) {
            return Err(Error::invalid(format!("fake scale must be positive, got {}", self.fake_scale)));
        }
        Ok(())
    }
}

/// `S x F_hidden` sample matrix with class labels `1..=C`, class-major rows.
#[derive(Debug, Clone, PartialEq)]
pub struct HiddenMatrix {
    pub values: Array2<f64>,
    pub labels: Vec<u32>,
}

/// Maps usefulness to a sampling scale: `envelope_scale * (1 - u) / u`,
/// capped at `fake_scale`. Zero usefulness gets `fake_scale` itself.
pub fn usefulness_to_scale(u: f64, envelope_scale: f64, fake_scale: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&u) {
        return Err(Error::invalid(format!("usefulness must lie in [0, 1], got {u}")));
    }
    if u == 0.0 {
        return Ok(fake_scale);
    }
    Ok((envelope_scale * (1.0 - u) / u).min(fake_scale))
}

/// Draws `samples_per_class` rows per class. True features use the scale
/// from their usefulness times a per-(class, feature) jitter drawn from
/// `jitter`; fake features use `fake_scale`.
pub fn sample_hidden(
    values: &mut RandomStream,
    jitter: &mut RandomStream,
    plan: &LocationPlan,
    spec: &SamplerSpec,
    envelope: &Envelope,
) -> Result<HiddenMatrix> {
    spec.validate()?;
    let n_classes = plan.n_classes();
    let f_hidden = plan.n_hidden();
    let per_class = spec.samples_per_class;
    if plan.usefulness.len() != f_hidden || plan.true_mask.len() != f_hidden {
        return Err(Error::invalid("location plan vectors disagree with its location matrix"));
    }

    let value_streams = values.fork_many("feature", f_hidden)?;
    let jitter_streams = jitter.fork_many("feature", f_hidden)?;
    let columns: Vec<Vec<f64>> = value_streams
        .into_par_iter()
        .zip(jitter_streams)
        .enumerate()
        .map(|(j, (mut vs, mut js))| {
            let base = if plan.true_mask[j] {
                usefulness_to_scale(plan.usefulness[j], envelope.scale, spec.fake_scale)?
            } else {
                spec.fake_scale
            };
            let mut col = Vec::with_capacity(n_classes * per_class);
            for k in 0..n_classes {
                let scale = if plan.true_mask[j] {
                    let lo = 1.0 - spec.scale_jitter;
                    base * js.draw_uniform(lo, 2.0 * spec.scale_jitter, 1)?[0]
                } else {
                    base
                };
                col.extend(spec.distribution.draw(&mut vs, plan.locations[[k, j]], scale, per_class)?);
            }
            Ok(col)
        })
        .collect::<Result<_>>()?;

    let n_rows = n_classes * per_class;
    let mut matrix = Array2::zeros((n_rows, f_hidden));
    for (j, col) in columns.into_iter().enumerate() {
        matrix.column_mut(j).assign(&ndarray::Array1::from(col));
    }
    let labels = (0..n_classes)
        .flat_map(|k| std::iter::repeat_n(k as u32 + 1, per_class))
        .collect();
    Ok(HiddenMatrix { values: matrix, labels })
}

/// Divides every column by its population standard deviation, leaving the
/// mean in place. Constant columns are left untouched. Returns the divisors.
pub fn normalize_columns(values: &mut Array2<f64>) -> Vec<f64> {
    let mut divisors = Vec::with_capacity(values.ncols());
    for mut col in values.axis_iter_mut(Axis(1)) {
        // Rounding can give an equal-valued column a tiny nonzero variance.
        if col.iter().all(|&x| x == col[0]) {
            divisors.push(1.0);
            continue;
        }
        let n = col.len() as f64;
        let mean = col.sum() / n;
        let var = col.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
        let sd = var.sqrt();
        if sd > 0.0 && sd.is_finite() {
            col.mapv_inplace(|x| x / sd);
            divisors.push(sd);
        } else {
            divisors.push(1.0);
        }
    }
    divisors
}
