//! End-to-end generation: locations, hidden samples, polynomial expansion,
//! sparse blending and noise, in that order.
//!
//! Each stage draws from its own stream forked off the root seed
//! (`locations`, `sampler`, `usefulness-jitter`, `weights`, `noise`), so
//! no stage observes another's random state. The transitional matrix is
//! never materialized here: rows are expanded and blended block by block,
//! which gives the same values as [`crate::polynomial::expand`] followed by
//! [`crate::blend::blend`].

use ndarray::{Array2, ArrayView2, Axis};
use rayon::prelude::*;

use crate::blend::{blend_rows, make_weights, BlendMode, BlendingKind, Positivity, PositivityKind};
use crate::config::GeneratorConfig;
use crate::error::{Error, Result};
use crate::io::DatasetBundle;
use crate::location::make_locations;
use crate::noise::add_noise_in_place;
use crate::polynomial::Monomials;
use crate::rng::RandomStream;
use crate::sampler::{normalize_columns, sample_hidden};

const ROW_BLOCK: usize = 16;

/// Runs every stage for `config` and assembles the dataset bundle.
pub fn run_pipeline(config: &GeneratorConfig) -> Result<DatasetBundle> {
    match config.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Internal(format!("cannot start {n} worker threads: {e}")))?
            .install(|| generate(config)),
        None => generate(config),
    }
}

fn generate(config: &GeneratorConfig) -> Result<DatasetBundle> {
    let mut root = RandomStream::new(config.seed);
    let mut location_stream = root.fork("locations")?;
    let mut sampler_stream = root.fork("sampler")?;
    let mut jitter_stream = root.fork("usefulness-jitter")?;
    let mut weight_stream = root.fork("weights")?;
    let mut noise_stream = root.fork("noise")?;

    let plan = make_locations(
        &mut location_stream,
        &config.envelope,
        &config.usefulness(),
        config.n_labels,
        config.n_true_features,
        config.n_fake_features,
        config.ordering_extent,
        config.sharing_extent,
    )?;

    let mut hidden = sample_hidden(&mut sampler_stream, &mut jitter_stream, &plan, &config.sampler(), &config.envelope)?;
    normalize_columns(&mut hidden.values);

    let monomials = Monomials::new(plan.n_hidden(), config.polynomial_degree)?;
    let weights = make_weights(
        &mut weight_stream,
        config.n_features_out,
        monomials.len(),
        config.blend_k_min,
        config.blend_k_max,
        config.dirichlet_concentration,
    )?;

    let mode = match (config.blending_mode, config.log_positivity) {
        (BlendingKind::Linear, _) => BlendMode::Linear,
        (BlendingKind::Logarithmic, PositivityKind::Exponential) => BlendMode::Logarithmic(Positivity::Exponential),
        (BlendingKind::Logarithmic, PositivityKind::Shift) => {
            BlendMode::Logarithmic(Positivity::auto_shift(transitional_min(hidden.values.view(), &monomials)))
        }
    };

    let mut visible = Array2::zeros((hidden.values.nrows(), weights.n_visible()));
    hidden
        .values
        .axis_chunks_iter(Axis(0), ROW_BLOCK)
        .into_par_iter()
        .zip(visible.axis_chunks_iter_mut(Axis(0), ROW_BLOCK))
        .try_for_each(|(h, out)| {
            let mut trans = Array2::zeros((h.nrows(), monomials.len()));
            monomials.eval_rows(h, trans.view_mut());
            blend_rows(trans.view(), &weights, mode, out)
        })?;

    let alpha = add_noise_in_place(&mut noise_stream, &mut visible, &config.noise)?;

    let positivity_shift = match mode {
        BlendMode::Logarithmic(p) => p.shift(),
        BlendMode::Linear => 0.0,
    };
    let bundle = DatasetBundle {
        visible,
        labels: hidden.labels,
        hidden: config.store_hidden.then_some(hidden.values),
        usefulness: plan.usefulness,
        true_mask: plan.true_mask,
        alpha,
        weights,
        config: config.clone(),
        positivity_shift,
    };
    bundle.validate()?;
    Ok(bundle)
}

/// Smallest transitional value, computed block-wise without keeping the
/// transitional matrix.
fn transitional_min(hidden: ArrayView2<'_, f64>, monomials: &Monomials) -> f64 {
    hidden
        .axis_chunks_iter(Axis(0), ROW_BLOCK)
        .into_par_iter()
        .map(|h| {
            let mut trans = Array2::zeros((h.nrows(), monomials.len()));
            monomials.eval_rows(h, trans.view_mut());
            trans.iter().copied().fold(f64::INFINITY, f64::min)
        })
        .reduce(|| f64::INFINITY, f64::min)
}
