//! The default configuration: 100 classes of 16 samples, 200 hidden
//! features, 20300 transitional and 10000 visible ones.
//!
//! `cargo run --release --example full_scale -- [seed] [linear|logarithmic]`

use std::time::Instant;

use bioblend::stats::{median, skewness};
use bioblend::{run_pipeline, validate_config, RawConfig, Result};

fn main() -> Result<()> {
    let mut args = std::env::args().skip(1);
    let seed = args.next().unwrap_or_else(|| "0".into());
    let mode = args.next().unwrap_or_else(|| "logarithmic".into());
    let config = validate_config(&RawConfig::new().with("seed", &seed).with("blending-mode", &mode))?;
    let d = config.derived();
    println!("{} samples, {} hidden, {} transitional, {} visible", d.n_samples, d.n_hidden, d.n_transitional, config.n_features_out);

    let start = Instant::now();
    let bundle = run_pipeline(&config)?;
    println!("generated in {:.2?}", start.elapsed());

    let skew: Vec<f64> = bundle.visible.columns().into_iter().map(|c| skewness(&c.to_vec())).collect();
    let alpha_mean = bundle.alpha.iter().sum::<f64>() / bundle.alpha.len() as f64;
    println!("median column skewness {:.3}, mean alpha {alpha_mean:.3}", median(&skew));
    Ok(())
}
