mod common;

use bioblend::blend::{blend, make_weights, BlendMode, Positivity};
use bioblend::config::KEYS;
use bioblend::location::make_locations;
use bioblend::noise::add_noise;
use bioblend::polynomial::expand;
use bioblend::sampler::{normalize_columns, sample_hidden};
use bioblend::{run_pipeline, validate_config, Error, GeneratorConfig, RandomStream, RawConfig};
use common::desk;

fn minimal() -> RawConfig {
    RawConfig::new()
        .with("n-labels", 2)
        .with("n-samples-per-label", 2)
        .with("n-true-features", 1)
        .with("n-fake-features", 0)
        .with("n-features-out", 1)
        .with("polynomial-degree", 1)
        .with("noise", false)
        .with("blend-k-min", 1)
        .with("blend-k-max", 1)
        .with("average-consecutive-locations", 0)
        .with("average-shared-locations", 0)
        .with("store-hidden", true)
}

#[test]
fn minimal_config_passes_the_hidden_column_through() {
    for seed in 0..5 {
        let config = validate_config(&minimal().with("seed", seed)).unwrap();
        let bundle = run_pipeline(&config).unwrap();
        let hidden = bundle.hidden.as_ref().unwrap();
        assert_eq!(bundle.visible.dim(), (4, 1));
        assert_eq!(bundle.visible, *hidden);
        assert_eq!(bundle.alpha, vec![1.0]);
        assert_eq!(bundle.labels, vec![1, 1, 2, 2]);
    }
}

/// Runs every stage on whole matrices, the way a reader of the pipeline
/// description would, for comparison with the streamed implementation.
fn materialized(config: &GeneratorConfig) -> (ndarray::Array2<f64>, Vec<f64>) {
    let mut root = RandomStream::new(config.seed);
    let plan = make_locations(
        &mut root.fork("locations").unwrap(),
        &config.envelope,
        &config.usefulness(),
        config.n_labels,
        config.n_true_features,
        config.n_fake_features,
        config.ordering_extent,
        config.sharing_extent,
    )
    .unwrap();
    let mut hidden = sample_hidden(
        &mut root.fork("sampler").unwrap(),
        &mut root.fork("usefulness-jitter").unwrap(),
        &plan,
        &config.sampler(),
        &config.envelope,
    )
    .unwrap();
    normalize_columns(&mut hidden.values);
    let trans = expand(hidden.values.view(), config.polynomial_degree).unwrap();
    let weights = make_weights(
        &mut root.fork("weights").unwrap(),
        config.n_features_out,
        trans.ncols(),
        config.blend_k_min,
        config.blend_k_max,
        config.dirichlet_concentration,
    )
    .unwrap();
    let mode = match config.blending_mode {
        bioblend::blend::BlendingKind::Linear => BlendMode::Linear,
        bioblend::blend::BlendingKind::Logarithmic => match config.log_positivity {
            bioblend::blend::PositivityKind::Exponential => BlendMode::Logarithmic(Positivity::Exponential),
            bioblend::blend::PositivityKind::Shift => {
                let min = trans.iter().copied().fold(f64::INFINITY, f64::min);
                BlendMode::Logarithmic(Positivity::auto_shift(min))
            }
        },
    };
    let visible = blend(trans.view(), &weights, mode).unwrap();
    add_noise(&mut root.fork("noise").unwrap(), &visible, &config.noise).unwrap()
}

#[test]
fn streamed_pipeline_equals_whole_matrix_stages() {
    for (mode, positivity) in [("linear", "exponential"), ("logarithmic", "exponential"), ("logarithmic", "shift")] {
        let raw = common::desk_raw(4, mode).with("log-positivity", positivity).with("n-features-out", 300);
        let config = validate_config(&raw).unwrap();
        let bundle = run_pipeline(&config).unwrap();
        let (visible, alpha) = materialized(&config);
        assert_eq!(bundle.visible, visible, "{mode}/{positivity}");
        assert_eq!(bundle.alpha, alpha);
    }
}

#[test]
fn thread_count_does_not_change_results() {
    let base = desk(2, "logarithmic");
    let one = run_pipeline(&GeneratorConfig { threads: Some(1), ..base.clone() }).unwrap();
    let three = run_pipeline(&GeneratorConfig { threads: Some(3), ..base }).unwrap();
    assert_eq!(one.visible, three.visible);
    assert_eq!(one.alpha, three.alpha);
}

#[test]
fn seeds_change_the_data() {
    let a = run_pipeline(&desk(1, "linear")).unwrap();
    let b = run_pipeline(&desk(2, "linear")).unwrap();
    assert_ne!(a.visible, b.visible);
}

#[test]
fn shift_positivity_is_recorded() {
    let raw = common::desk_raw(4, "logarithmic").with("log-positivity", "shift").with("n-features-out", 50);
    let bundle = run_pipeline(&validate_config(&raw).unwrap()).unwrap();
    assert!(bundle.positivity_shift >= 1.0);
    assert!(bundle.visible.iter().all(|v| v.is_finite()));
    let linear = run_pipeline(&desk(4, "linear")).unwrap();
    assert_eq!(linear.positivity_shift, 0.0);
}

#[test]
fn defaults_are_documented_values() {
    let c = validate_config(&RawConfig::new().with("seed", 42)).unwrap();
    assert_eq!(c.seed, 42);
    assert_eq!((c.n_labels, c.n_samples_per_label, c.n_true_features, c.n_fake_features), (100, 16, 40, 160));
    assert_eq!((c.ordering_extent, c.sharing_extent, c.n_features_out), (2, 3, 10_000));
    assert_eq!((c.polynomial_degree, c.blend_k_min, c.blend_k_max), (2, 2, 4));
    assert_eq!(c.n_hidden(), 200);
    assert_eq!(c.n_transitional(), 20_300);
    assert_eq!(GeneratorConfig { seed: 0, ..c.clone() }, GeneratorConfig::default());
    assert_eq!(KEYS.len(), c.key_values().len() + 3, "every stored key except seed, output and threads");
}

fn errors(raw: &RawConfig) -> Vec<String> {
    match validate_config(raw) {
        Err(Error::Config(list)) => list,
        other => panic!("expected a configuration error, got {other:?}"),
    }
}

#[test]
fn validation_reports_every_violation() {
    let list = errors(&RawConfig::new().with("n-labels", 0));
    assert!(list.iter().any(|e| e.contains("n-labels must be ≥ 2")), "{list:?}");

    let list = errors(&RawConfig::new().with("average-shared-locations", 101));
    assert!(list.iter().any(|e| e.contains("average-shared-locations")), "{list:?}");

    let list = errors(
        &RawConfig::new()
            .with("n-true-features", 1)
            .with("n-fake-features", 0)
            .with("polynomial-degree", 1)
            .with("blend-k-max", 2)
            .with("bogus", 1)
            .with("noise-alpha-min", 0.9)
            .with("noise-alpha-max", 0.1)
            .with("blending-mode", "cubic"),
    );
    assert!(list.len() >= 4, "{list:?}");
    assert!(list.iter().any(|e| e.contains("bogus")));
    assert!(list.iter().any(|e| e.contains("blend-k-max")));
    assert!(list.iter().any(|e| e.contains("cubic")));
}

#[test]
fn key_value_files_parse() {
    let raw = RawConfig::parse_key_values("# desk run\nn-labels = 20\n\nseed=9  # trailing\n").unwrap();
    assert_eq!(raw.get("n-labels"), Some("20"));
    assert_eq!(raw.get("seed"), Some("9"));
    assert!(RawConfig::parse_key_values("no equals sign").is_err());
}
