//! Interpolating features with matched Gaussian noise. Alpha is the
//! fraction of signal kept; each feature draws its own.

use bioblend::blend::BlendingKind;
use bioblend::eval::anova_f_scores;
use bioblend::noise::{add_noise, NoiseSpec};
use bioblend::stats::mean;
use bioblend::{RandomStream, Result};
use ndarray::Array2;

fn main() -> Result<()> {
    let mut s = RandomStream::new(2);
    let (classes, per_class, features) = (5, 40, 6);
    let labels: Vec<u32> = (1..=classes).flat_map(|c| std::iter::repeat_n(c, per_class)).collect();
    let mut x = Array2::zeros((labels.len(), features));
    for (i, &c) in labels.iter().enumerate() {
        for j in 0..features {
            x[[i, j]] = c as f64 + s.next_normal(0.0, 0.5);
        }
    }
    println!("clean F-scores: {:.1?}", anova_f_scores(x.view(), &labels)?);

    for (lo, hi) in [(1.0, 1.0), (0.3, 0.9), (0.0, 0.0)] {
        let spec = NoiseSpec { enabled: true, mode: BlendingKind::Linear, alpha_min: lo, alpha_max: hi };
        let (noisy, alpha) = add_noise(&mut s.fork(&format!("noise-{lo}-{hi}"))?, &x, &spec)?;
        let f = anova_f_scores(noisy.view(), &labels)?;
        println!("alpha in [{lo}, {hi}]: alpha {alpha:.2?}");
        println!("{:>20} F-scores {f:.1?}, first column mean {:.3}", "", mean(&noisy.column(0).to_vec()));
    }
    Ok(())
}
