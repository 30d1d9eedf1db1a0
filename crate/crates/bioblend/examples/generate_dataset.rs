//! Generates a small dataset from settings, writes HDF5 and CSV, and reads
//! the HDF5 file back.
//!
//! `cargo run --release --example generate_dataset -- [output-dir]`

use bioblend::io::export_csv;
use bioblend::{read_hdf5, run_pipeline, validate_config, write_hdf5, RawConfig, Result};

fn main() -> Result<()> {
    let dir = std::env::args().nth(1).unwrap_or_else(|| std::env::temp_dir().join("bioblend-example").display().to_string());
    std::fs::create_dir_all(&dir).map_err(|e| bioblend::Error::io(&dir, e))?;

    let raw = RawConfig::parse_key_values(
        "n-labels = 10\n\
         n-samples-per-label = 20\n\
         n-true-features = 6\n\
         n-fake-features = 14\n\
         n-features-out = 500\n\
         blending-mode = logarithmic\n\
         store-hidden = true\n\
         seed = 12\n",
    )?;
    let config = validate_config(&raw)?;
    for (key, value) in config.key_values() {
        println!("{key} = {value}");
    }

    let bundle = run_pipeline(&config)?;
    let path = std::path::Path::new(&dir).join("small.h5");
    write_hdf5(&bundle, &path)?;
    let csv = export_csv(&bundle, &dir)?;
    println!("\nwrote {} and {} csv files to {dir}", path.display(), csv.len());

    let back = read_hdf5(&path)?;
    println!(
        "read back {} x {} visible, {} hidden, identical: {}",
        back.n_samples(),
        back.n_visible(),
        back.n_hidden(),
        back.visible == bundle.visible
    );
    Ok(())
}
