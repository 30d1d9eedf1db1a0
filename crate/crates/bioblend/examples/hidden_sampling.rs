//! Sampling hidden features around class locations. More useful features
//! get tighter classes and a larger F-score. Usefulness 1 would mean zero
//! spread, so this run stops at 0.9.

use bioblend::eval::anova_f_scores;
use bioblend::location::{make_locations, DistributionKind, Envelope, SchemeKind, UsefulnessScheme};
use bioblend::sampler::{normalize_columns, sample_hidden, SamplerSpec};
use bioblend::{RandomStream, Result};

fn main() -> Result<()> {
    let env = Envelope::standard_normal();
    let scheme = UsefulnessScheme::new(SchemeKind::Linear, 0.2, 0.9)?;
    let mut root = RandomStream::new(11);
    let plan = make_locations(&mut root.fork("locations")?, &env, &scheme, 10, 5, 3, 2, 3)?;
    let spec = SamplerSpec {
        distribution: DistributionKind::Normal,
        samples_per_class: 30,
        scale_jitter: 0.1,
        fake_scale: 2.0,
    };
    let mut hidden = sample_hidden(&mut root.fork("sampler")?, &mut root.fork("usefulness-jitter")?, &plan, &spec, &env)?;
    let divisors = normalize_columns(&mut hidden.values);
    let f = anova_f_scores(hidden.values.view(), &hidden.labels)?;

    println!("{} samples, {} hidden features", hidden.values.nrows(), hidden.values.ncols());
    println!("feature  true  usefulness  divisor  F-score");
    for j in 0..f.len() {
        println!("{j:>7}  {:>4}  {:>10.3}  {:>7.3}  {:>7.2}", plan.true_mask[j], plan.usefulness[j], divisors[j], f[j]);
    }
    Ok(())
}
