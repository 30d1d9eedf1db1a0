//! Degree-bounded monomials of hidden features with scale-preserving roots.
//!
//! Every multiset of `1..=d` hidden feature indices becomes one
//! transitional feature: the product of the selected values, taken to the
//! power `1/g` where `g` is the multiset size. Negative products keep their
//! sign (`sign(p) * |p|^(1/g)`). Columns are ordered by degree first, then
//! lexicographically over the sorted index tuples.

use ndarray::{Array2, ArrayView2, ArrayViewMut2, Axis};
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Number of transitional features, `C(f_hidden + d, d) - 1`.
pub fn count_transitional(f_hidden: usize, degree: usize) -> Result<usize> {
    if degree == 0 {
        return Err(Error::invalid("polynomial degree must be at least 1"));
    }
    if f_hidden == 0 {
        return Err(Error::invalid("need at least one hidden feature"));
    }
    let n = (f_hidden + degree) as u128;
    let mut binom: u128 = 1;
    for i in 1..=degree as u128 {
        // C(n - d + i, i) = C(n - d + i - 1, i - 1) * (n - d + i) / i stays integral.
        binom = binom
            .checked_mul(n - degree as u128 + i)
            .ok_or_else(|| Error::invalid("transitional feature count overflows"))?
            / i;
    }
    usize::try_from(binom - 1).map_err(|_| Error::invalid("transitional feature count overflows"))
}

/// Multisets of hidden feature indices in transitional column order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Monomials {
    f_hidden: usize,
    degree: usize,
    terms: Vec<Vec<usize>>,
}

impl Monomials {
    pub fn new(f_hidden: usize, degree: usize) -> Result<Self> {
        let count = count_transitional(f_hidden, degree)?;
        let mut terms = Vec::with_capacity(count);
        for g in 1..=degree {
            let mut idx = vec![0usize; g];
            loop {
                terms.push(idx.clone());
                // Next nondecreasing tuple: bump the rightmost slot that can
                // still grow and reset everything after it to the same value.
                let Some(pos) = idx.iter().rposition(|&i| i + 1 < f_hidden) else {
                    break;
                };
                let next = idx[pos] + 1;
                idx[pos..].fill(next);
            }
        }
        debug_assert_eq!(terms.len(), count);
        Ok(Monomials { f_hidden, degree, terms })
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn f_hidden(&self) -> usize {
        self.f_hidden
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &[Vec<usize>] {
        &self.terms
    }

    /// Evaluates every monomial on one sample's hidden values.
    pub fn eval_row(&self, hidden: &[f64], out: &mut [f64]) {
        debug_assert_eq!(hidden.len(), self.f_hidden);
        debug_assert_eq!(out.len(), self.terms.len());
        for (cell, term) in out.iter_mut().zip(&self.terms) {
            let product: f64 = term.iter().map(|&j| hidden[j]).product();
            *cell = signed_root(product, term.len());
        }
    }

    /// Evaluates a block of rows into a preallocated `rows x len()` buffer.
    pub fn eval_rows(&self, hidden: ArrayView2<'_, f64>, mut out: ArrayViewMut2<'_, f64>) {
        let mut buf = vec![0.0; self.terms.len()];
        for (h, mut o) in hidden.rows().into_iter().zip(out.rows_mut()) {
            let h = h.to_vec();
            match o.as_slice_mut() {
                Some(slice) => self.eval_row(&h, slice),
                None => {
                    self.eval_row(&h, &mut buf);
                    o.assign(&ndarray::ArrayView1::from(&buf));
                }
            }
        }
    }
}

/// `sign(p) * |p|^(1/degree)`.
pub fn signed_root(p: f64, degree: usize) -> f64 {
    match degree {
        1 => p,
        2 => p.signum() * p.abs().sqrt(),
        3 => p.cbrt(),
        g => p.signum() * p.abs().powf(1.0 / g as f64),
    }
}

/// Materializes the full `S x F_trans` transitional matrix.
pub fn expand(values: ArrayView2<'_, f64>, degree: usize) -> Result<Array2<f64>> {
    let monomials = Monomials::new(values.ncols(), degree)?;
    let mut out = Array2::zeros((values.nrows(), monomials.len()));
    // Rows are independent; a block size of 64 keeps the buffers warm.
    values
        .axis_chunks_iter(Axis(0), 64)
        .into_par_iter()
        .zip(out.axis_chunks_iter_mut(Axis(0), 64))
        .for_each(|(h, o)| monomials.eval_rows(h, o));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn counts() {
        assert_eq!(count_transitional(3, 2).unwrap(), 9);
        assert_eq!(count_transitional(17, 1).unwrap(), 17);
        assert_eq!(count_transitional(2, 3).unwrap(), 9);
        assert_eq!(count_transitional(200, 2).unwrap(), 20_300);
        assert!(count_transitional(3, 0).is_err());
        assert!(count_transitional(0, 2).is_err());
    }

    #[test]
    fn order_is_degree_major_then_lexicographic() {
        let m = Monomials::new(3, 2).unwrap();
        let expected: Vec<Vec<usize>> = vec![
            vec![0],
            vec![1],
            vec![2],
            vec![0, 0],
            vec![0, 1],
            vec![0, 2],
            vec![1, 1],
            vec![1, 2],
            vec![2, 2],
        ];
        assert_eq!(m.terms(), expected.as_slice());
    }

    #[test]
    fn signed_root_examples() {
        assert_eq!(signed_root(4.0 * 9.0, 2), 6.0);
        assert_eq!(signed_root(4.0 * -9.0, 2), -6.0);
        // The product of a repeated factor is nonnegative, so an even root
        // returns the magnitude.
        assert_eq!(signed_root(-3.0 * -3.0, 2), 3.0);
        assert_eq!(signed_root(-27.0, 3), -3.0);
        assert_eq!(signed_root(0.0, 4), 0.0);
    }

    #[test]
    fn expand_small() {
        let x = array![[4.0, 9.0], [4.0, -9.0]];
        let t = expand(x.view(), 2).unwrap();
        // Columns: x, y, xx, xy, yy.
        assert_eq!(t.row(0).to_vec(), vec![4.0, 9.0, 4.0, 6.0, 9.0]);
        assert_eq!(t.row(1).to_vec(), vec![4.0, -9.0, 4.0, -6.0, 9.0]);
    }

    #[test]
    fn degree_one_is_identity() {
        let x = array![[1.5, -2.0, 0.25], [3.0, 7.0, -0.5]];
        assert_eq!(expand(x.view(), 1).unwrap(), x);
        let t = expand(x.view(), 3).unwrap();
        assert_eq!(t.slice(ndarray::s![.., 0..3]), x);
    }
}
