//! Command-line front end: `generate` writes a dataset, `validate` measures
//! its screening effect.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use bioblend::config::KEYS;
use bioblend::eval::{screening_curve, write_report, ScreeningOptions};
use bioblend::io::export_csv;
use bioblend::{read_hdf5, run_pipeline, validate_config, write_hdf5, Error, RawConfig, Result};
use clap::{value_parser, Arg, ArgAction, ArgMatches, Command};

const SEED_ENV: &str = "BIOBLEND_SEED";

fn generate_command() -> Command {
    let mut cmd = Command::new("generate")
        .about("Generate a dataset and write it as HDF5")
        .arg(
            Arg::new("config")
                .long("config")
                .value_name("FILE")
                .value_parser(value_parser!(PathBuf))
                .help("key = value settings file; flags take precedence"),
        )
        .arg(
            Arg::new("dry-run")
                .long("dry-run")
                .action(ArgAction::SetTrue)
                .help("print the resolved configuration and derived sizes, generate nothing"),
        )
        .arg(
            Arg::new("csv-dir")
                .long("csv-dir")
                .value_name("DIR")
                .value_parser(value_parser!(PathBuf))
                .help("also export features.csv and labels.csv into DIR"),
        );
    for &(key, default, about) in KEYS {
        let mut arg = Arg::new(key).long(key).value_name("VALUE").help(format!("{about} [default: {default}]"));
        if key == "store-hidden" {
            arg = arg.num_args(0..=1).default_missing_value("true");
        }
        if key == "seed" {
            arg = arg.env(SEED_ENV);
        }
        cmd = cmd.arg(arg);
    }
    cmd
}

fn validate_command() -> Command {
    Command::new("validate")
        .about("Score features, screen them, and report cross-validated kNN accuracy")
        .arg(Arg::new("input").long("input").required(true).value_name("FILE").value_parser(value_parser!(PathBuf)))
        .arg(
            Arg::new("k-list")
                .long("k-list")
                .value_delimiter(',')
                .value_parser(value_parser!(usize))
                .default_value("10,25,50,100,200,400,800")
                .help("numbers of top-scoring features to keep"),
        )
        .arg(Arg::new("folds").long("folds").value_parser(value_parser!(usize)).default_value("4"))
        .arg(
            Arg::new("neighbors")
                .long("neighbors")
                .value_delimiter(',')
                .value_parser(value_parser!(usize))
                .default_value("1,5"),
        )
        .arg(Arg::new("report").long("report").value_name("PATH").value_parser(value_parser!(PathBuf)))
        .arg(
            Arg::new("seed")
                .long("seed")
                .value_parser(value_parser!(u64))
                .default_value("0")
                .help("seed of the fold assignment"),
        )
}

fn raw_config(m: &ArgMatches) -> Result<RawConfig> {
    let mut raw = match m.get_one::<PathBuf>("config") {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
            RawConfig::parse_key_values(&text)?
        }
        None => RawConfig::new(),
    };
    for &(key, _, _) in KEYS {
        if let Some(v) = m.get_one::<String>(key) {
            // The environment seed only fills in when neither source set one.
            let from_env = m.value_source(key) == Some(clap::parser::ValueSource::EnvVariable);
            if !(from_env && raw.contains(key)) {
                raw.set(key, v.clone());
            }
        }
    }
    Ok(raw)
}

fn generate(m: &ArgMatches) -> Result<()> {
    let config = validate_config(&raw_config(m)?)?;
    let derived = config.derived();
    if m.get_flag("dry-run") {
        for (key, value) in config.key_values() {
            println!("{key} = {value}");
        }
        println!("# samples = {}", derived.n_samples);
        println!("# hidden features = {}", derived.n_hidden);
        println!("# transitional features = {}", derived.n_transitional);
        println!("# visible features = {}", derived.n_visible);
        println!("# estimated output bytes = {}", derived.estimated_output_bytes);
        return Ok(());
    }

    let start = Instant::now();
    eprintln!(
        "generating {} x {} from {} hidden features ({} transitional), seed {}",
        derived.n_samples, derived.n_visible, derived.n_hidden, derived.n_transitional, config.seed
    );
    let bundle = run_pipeline(&config)?;
    eprintln!("generated in {:.1?}", start.elapsed());
    write_hdf5(&bundle, &config.output_path)?;
    eprintln!("wrote {}", config.output_path.display());
    if let Some(dir) = m.get_one::<PathBuf>("csv-dir") {
        for path in export_csv(&bundle, dir)? {
            eprintln!("wrote {}", path.display());
        }
    }
    Ok(())
}

fn validate(m: &ArgMatches) -> Result<()> {
    let input = m.get_one::<PathBuf>("input").unwrap();
    let options = ScreeningOptions {
        k_list: m.get_many::<usize>("k-list").unwrap().copied().collect(),
        folds: *m.get_one::<usize>("folds").unwrap(),
        neighbors: m.get_many::<usize>("neighbors").unwrap().copied().collect(),
        seed: *m.get_one::<u64>("seed").unwrap(),
    };
    let bundle = read_hdf5(input)?;
    eprintln!("scoring {} x {} from {}", bundle.n_samples(), bundle.n_visible(), input.display());
    let report = screening_curve(&bundle, &options)?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }

    let header: Vec<String> = report.neighbors.iter().map(|k| format!("{k}-NN")).collect();
    println!("{:>12} {}", "features", header.iter().map(|h| format!("{h:>8}")).collect::<String>());
    let row = |name: String, acc: &[f64]| {
        println!("{name:>12} {}", acc.iter().map(|a| format!("{a:>8.3}")).collect::<String>());
    };
    for p in &report.curve {
        row(format!("top {}", p.k), &p.accuracy);
    }
    row("all".into(), &report.unreduced);
    if let Some(t) = &report.true_features {
        row("true hidden".into(), t);
    }
    if let Some(path) = m.get_one::<PathBuf>("report") {
        write_report(path, &bundle.config, &report)?;
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let matches = Command::new("bioblend")
        .version(env!("CARGO_PKG_VERSION"))
        .about("Synthetic ultra-high dimensional multi-class datasets with ground truth")
        .subcommand_required(true)
        .subcommand(generate_command())
        .subcommand(validate_command())
        .get_matches();
    let result = match matches.subcommand() {
        Some(("generate", m)) => generate(m),
        Some(("validate", m)) => validate(m),
        _ => unreachable!("subcommand is required"),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
