//! Feature screening on a generated dataset: kNN accuracy with the top-k
//! F-score features, with all visible features, and with the true hidden
//! ones.

use bioblend::eval::{screening_curve, ScreeningOptions};
use bioblend::{run_pipeline, validate_config, RawConfig, Result};

fn main() -> Result<()> {
    let config = validate_config(
        &RawConfig::new()
            .with("n-labels", 20)
            .with("n-samples-per-label", 16)
            .with("n-true-features", 8)
            .with("n-fake-features", 32)
            .with("n-features-out", 2000)
            .with("blending-mode", "logarithmic")
            .with("store-hidden", true),
    )?;
    let bundle = run_pipeline(&config)?;
    let report = screening_curve(&bundle, &ScreeningOptions::default())?;

    let header: Vec<String> = report.neighbors.iter().map(|k| format!("{k:>6}-NN")).collect();
    println!("{:>12} {}", "features", header.join(" "));
    let row = |name: String, acc: &[f64]| {
        let cells: Vec<String> = acc.iter().map(|a| format!("{a:>9.3}")).collect();
        println!("{name:>12} {}", cells.join(" "));
    };
    for point in &report.curve {
        row(format!("top {}", point.k), &point.accuracy);
    }
    row("all".into(), &report.unreduced);
    if let Some(t) = &report.true_features {
        row("true hidden".into(), t);
    }
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    Ok(())
}
