//! Sparse Dirichlet mixing of transitional features into visible ones,
//! linearly and as a weighted geometric mean.

use bioblend::blend::{blend, make_weights, BlendMode, Positivity};
use bioblend::stats::{median, skewness};
use bioblend::{RandomStream, Result};
use ndarray::Array2;

fn main() -> Result<()> {
    let mut s = RandomStream::new(5);
    let (rows, f_trans, f_vis) = (2000, 60, 200);
    let x = Array2::from_shape_vec((rows, f_trans), s.draw_normal(0.0, 1.0, rows * f_trans)?).unwrap();
    let w = make_weights(&mut s.fork("weights")?, f_vis, f_trans, 2, 4, 1.0)?;

    let (idx, val) = w.row(0);
    println!("visible 0 mixes {idx:?} with weights {val:.3?}");

    for (name, mode) in [
        ("linear", BlendMode::Linear),
        ("logarithmic, exponential", BlendMode::Logarithmic(Positivity::Exponential)),
        ("logarithmic, shifted", BlendMode::Logarithmic(Positivity::auto_shift(x.iter().copied().fold(f64::INFINITY, f64::min)))),
    ] {
        let out = blend(x.view(), &w, mode)?;
        let skew: Vec<f64> = out.columns().into_iter().map(|c| skewness(&c.to_vec())).collect();
        println!("{name:>26}: median column skewness {:.3}", median(&skew));
    }
    Ok(())
}
