//! Monomial expansion of hidden features. Each product of `g` factors is
//! taken to its signed `g`-th root so every term keeps the input's scale.

use bioblend::polynomial::{count_transitional, expand, Monomials};
use bioblend::Result;
use ndarray::array;

fn main() -> Result<()> {
    for (f, d) in [(3, 2), (40, 2), (200, 2), (200, 3)] {
        println!("{f} hidden features, degree {d}: {} terms", count_transitional(f, d)?);
    }

    let x = array![[1.0, -2.0, 4.0], [-3.0, 0.5, 2.0]];
    let terms = Monomials::new(3, 2)?;
    let out = expand(x.view(), 2)?;
    for (c, term) in terms.terms().iter().enumerate() {
        println!("x{term:?}: {:>7.3?}", out.column(c).to_vec());
    }
    Ok(())
}
