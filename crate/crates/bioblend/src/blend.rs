//! Sparse Dirichlet mixing of transitional features into visible ones.
//!
//! Row `j` of the weight matrix describes visible feature `j`: a handful of
//! distinct transitional indices with positive weights summing to one.
//! Linear mode takes the weighted sum of those transitional columns;
//! logarithmic mode takes the product of their weighted powers.
//!
//! The product form needs positive operands. Two ways of getting them are
//! offered: adding a global shift (`-min + 1` of the transitional matrix),
//! or reading each transitional value as a log-magnitude, i.e. using
//! `exp(v)` as the operand. The latter turns the blend into
//! `exp(sum_t w_jt * v_it)`, which is lognormal-like when the inputs are
//! close to Gaussian.

use std::fmt;
use std::str::FromStr;

use ndarray::{Array2, ArrayView2, ArrayViewMut2, Axis};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::RandomStream;

/// `F_visible x F_trans` weights in compressed sparse row form.
#[derive(Debug, Clone, PartialEq)]
pub struct BlendWeights {
    row_offsets: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<f64>,
    n_transitional: usize,
    k_min: usize,
    k_max: usize,
}

impl BlendWeights {
    /// Builds weights from raw CSR arrays, checking every invariant.
    pub fn from_csr(
        row_offsets: Vec<usize>,
        indices: Vec<usize>,
        values: Vec<f64>,
        n_transitional: usize,
        k_min: usize,
        k_max: usize,
    ) -> Result<Self> {
        let w = BlendWeights { row_offsets, indices, values, n_transitional, k_min, k_max };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Format(format!("blend weights: {msg}")));
        if self.row_offsets.first() != Some(&0) {
            return bad("row offsets must start at 0".into());
        }
        if *self.row_offsets.last().unwrap() != self.indices.len() || self.indices.len() != self.values.len() {
            return bad("row offsets, indices and values disagree in length".into());
        }
        if !(1 <= self.k_min && self.k_min <= self.k_max) {
            return bad(format!("invalid nonzero-count support [{}, {}]", self.k_min, self.k_max));
        }
        for j in 0..self.n_visible() {
            if self.row_offsets[j] > self.row_offsets[j + 1] {
                return bad(format!("row offsets decrease at row {j}"));
            }
            let (idx, val) = self.row(j);
            if !(self.k_min..=self.k_max).contains(&idx.len()) {
                return bad(format!("row {j} has {} entries outside [{}, {}]", idx.len(), self.k_min, self.k_max));
            }
            if idx.windows(2).any(|p| p[0] >= p[1]) || idx.iter().any(|&t| t >= self.n_transitional) {
                return bad(format!("row {j} has repeated, unsorted or out-of-range indices"));
            }
            if val.iter().any(|&x| x.is_nan() || x <= 0.0) {
                return bad(format!("row {j} has a nonpositive weight"));
            }
            let total: f64 = val.iter().sum();
            if (total - 1.0).abs() > 1e-12 {
                return bad(format!("row {j} sums to {total}"));
            }
        }
        Ok(())
    }

    pub fn n_visible(&self) -> usize {
        self.row_offsets.len() - 1
    }

    pub fn n_transitional(&self) -> usize {
        self.n_transitional
    }

    pub fn support(&self) -> (usize, usize) {
        (self.k_min, self.k_max)
    }

    pub fn row(&self, j: usize) -> (&[usize], &[f64]) {
        let range = self.row_offsets[j]..self.row_offsets[j + 1];
        (&self.indices[range.clone()], &self.values[range])
    }

    pub fn row_offsets(&self) -> &[usize] {
        &self.row_offsets
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn to_dense(&self) -> Array2<f64> {
        let mut dense = Array2::zeros((self.n_visible(), self.n_transitional));
        for j in 0..self.n_visible() {
            let (idx, val) = self.row(j);
            for (&t, &w) in idx.iter().zip(val) {
                dense[[j, t]] = w;
            }
        }
        dense
    }
}

/// Draws one weight row per visible feature: a count from `k_min..=k_max`,
/// that many distinct transitional indices, and symmetric Dirichlet weights.
pub fn make_weights(
    stream: &mut RandomStream,
    f_visible: usize,
    f_trans: usize,
    k_min: usize,
    k_max: usize,
    concentration: f64,
) -> Result<BlendWeights> {
    if !(1 <= k_min && k_min <= k_max) {
        return Err(Error::invalid(format!("blend counts need 1 <= k_min <= k_max, got [{k_min}, {k_max}]")));
    }
    if k_max > f_trans {
        return Err(Error::invalid(format!(
            "cannot blend up to {k_max} of only {f_trans} transitional features"
        )));
    }
    let mut row_offsets = Vec::with_capacity(f_visible + 1);
    row_offsets.push(0);
    let mut indices = Vec::new();
    let mut values = Vec::new();
    for _ in 0..f_visible {
        let k = stream.draw_discrete_uniform(k_min as i64, k_max as i64, 1)?[0] as usize;
        indices.extend(stream.choose_distinct(f_trans, k)?);
        values.extend(stream.draw_dirichlet(concentration, k)?);
        row_offsets.push(indices.len());
    }
    Ok(BlendWeights { row_offsets, indices, values, n_transitional: f_trans, k_min, k_max })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BlendingKind {
    Linear,
    Logarithmic,
}

impl fmt::Display for BlendingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BlendingKind::Linear => "linear",
            BlendingKind::Logarithmic => "logarithmic",
        })
    }
}

impl FromStr for BlendingKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "linear" => Ok(BlendingKind::Linear),
            "logarithmic" => Ok(BlendingKind::Logarithmic),
            _ => Err(format!("unknown blending mode {s:?} (expected linear or logarithmic)")),
        }
    }
}

/// How logarithmic mode makes its operands positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PositivityKind {
    Exponential,
    Shift,
}

impl fmt::Display for PositivityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PositivityKind::Exponential => "exponential",
            PositivityKind::Shift => "shift",
        })
    }
}

impl FromStr for PositivityKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "exponential" | "exp" => Ok(PositivityKind::Exponential),
            "shift" => Ok(PositivityKind::Shift),
            _ => Err(format!("unknown positivity transform {s:?} (expected exponential or shift)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Positivity {
    /// Operand is `v + shift`.
    Shift(f64),
    /// Operand is `exp(v)`.
    Exponential,
}

impl Positivity {
    /// The global shift `-min + 1` that makes every value at least 1.
    pub fn auto_shift(min_value: f64) -> Positivity {
        Positivity::Shift(-min_value + 1.0)
    }

    pub fn shift(&self) -> f64 {
        match self {
            Positivity::Shift(s) => *s,
            Positivity::Exponential => 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BlendMode {
    Linear,
    Logarithmic(Positivity),
}

/// Blends a block of transitional rows into the matching visible rows.
pub fn blend_rows(
    values: ArrayView2<'_, f64>,
    weights: &BlendWeights,
    mode: BlendMode,
    mut out: ArrayViewMut2<'_, f64>,
) -> Result<()> {
    if values.ncols() != weights.n_transitional() || out.ncols() != weights.n_visible() || out.nrows() != values.nrows() {
        return Err(Error::invalid(format!(
            "blend shapes disagree: values {:?}, weights {}x{}, output {:?}",
            values.dim(),
            weights.n_visible(),
            weights.n_transitional(),
            out.dim()
        )));
    }
    for (src, mut dst) in values.rows().into_iter().zip(out.rows_mut()) {
        for (j, cell) in dst.iter_mut().enumerate() {
            let (idx, w) = weights.row(j);
            *cell = match mode {
                BlendMode::Linear => idx.iter().zip(w).map(|(&t, &wt)| src[t] * wt).sum(),
                BlendMode::Logarithmic(Positivity::Exponential) => {
                    idx.iter().zip(w).map(|(&t, &wt)| src[t] * wt).sum::<f64>().exp()
                }
                BlendMode::Logarithmic(Positivity::Shift(shift)) => {
                    let mut acc = 0.0;
                    for (&t, &wt) in idx.iter().zip(w) {
                        let operand = src[t] + shift;
                        if operand.is_nan() || operand <= 0.0 {
                            return Err(Error::Internal(format!(
                                "logarithmic blend operand {operand} is not positive after shifting by {shift}"
                            )));
                        }
                        acc += wt * operand.ln();
                    }
                    acc.exp()
                }
            };
        }
    }
    Ok(())
}

/// Blends a full `S x F_trans` matrix into `S x F_visible`.
pub fn blend(values: ArrayView2<'_, f64>, weights: &BlendWeights, mode: BlendMode) -> Result<Array2<f64>> {
    let mut out = Array2::zeros((values.nrows(), weights.n_visible()));
    values
        .axis_chunks_iter(Axis(0), 32)
        .into_par_iter()
        .zip(out.axis_chunks_iter_mut(Axis(0), 32))
        .try_for_each(|(src, dst)| blend_rows(src, weights, mode, dst))?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn weights(rows: &[&[(usize, f64)]], f_trans: usize) -> BlendWeights {
        let mut offsets = vec![0];
        let (mut idx, mut val) = (vec![], vec![]);
        for r in rows {
            for &(t, w) in *r {
                idx.push(t);
                val.push(w);
            }
            offsets.push(idx.len());
        }
        let k_min = rows.iter().map(|r| r.len()).min().unwrap();
        let k_max = rows.iter().map(|r| r.len()).max().unwrap();
        BlendWeights::from_csr(offsets, idx, val, f_trans, k_min, k_max).unwrap()
    }

    #[test]
    fn linear_mean() {
        let w = weights(&[&[(0, 0.5), (1, 0.5)]], 2);
        let out = blend(array![[2.0, 4.0]].view(), &w, BlendMode::Linear).unwrap();
        assert_eq!(out, array![[3.0]]);
    }

    #[test]
    fn logarithmic_geometric_mean() {
        let w = weights(&[&[(0, 0.5), (1, 0.5)]], 2);
        let out = blend(array![[4.0, 16.0]].view(), &w, BlendMode::Logarithmic(Positivity::Shift(0.0))).unwrap();
        assert!((out[[0, 0]] - 8.0).abs() < 1e-12);
        // The same geometric mean with exponential operands: exp(0.5 ln 4 + 0.5 ln 16).
        let logs = array![[4f64.ln(), 16f64.ln()]];
        let out = blend(logs.view(), &w, BlendMode::Logarithmic(Positivity::Exponential)).unwrap();
        assert!((out[[0, 0]] - 8.0).abs() < 1e-12);
    }

    #[test]
    fn single_source_is_identity() {
        let w = weights(&[&[(1, 1.0)], &[(0, 1.0)]], 3);
        let v = array![[1.25, -7.5, 3.0], [0.1, 2.0, -4.0]];
        let out = blend(v.view(), &w, BlendMode::Linear).unwrap();
        assert_eq!(out.column(0), v.column(1));
        assert_eq!(out.column(1), v.column(0));
    }

    #[test]
    fn nonpositive_shifted_operand_is_internal_error() {
        let w = weights(&[&[(0, 0.5), (1, 0.5)]], 2);
        let err = blend(array![[-2.0, 4.0]].view(), &w, BlendMode::Logarithmic(Positivity::Shift(1.0))).unwrap_err();
        assert!(matches!(err, Error::Internal(_)));
        let ok = blend(
            array![[-2.0, 4.0]].view(),
            &w,
            BlendMode::Logarithmic(Positivity::auto_shift(-2.0)),
        )
        .unwrap();
        // Operands 1 and 7.
        assert!((ok[[0, 0]] - 7f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn make_weights_rows_are_on_the_simplex() {
        let mut s = RandomStream::new(4);
        let w = make_weights(&mut s, 500, 50, 2, 5, 1.0).unwrap();
        w.validate().unwrap();
        assert_eq!(w.n_visible(), 500);
        assert_eq!(w.support(), (2, 5));
    }

    #[test]
    fn single_entry_rows() {
        let mut s = RandomStream::new(4);
        let w = make_weights(&mut s, 100, 7, 1, 1, 1.0).unwrap();
        for j in 0..100 {
            let (idx, val) = w.row(j);
            assert_eq!(idx.len(), 1);
            assert_eq!(val, &[1.0]);
        }
    }

    #[test]
    fn make_weights_argument_errors() {
        let mut s = RandomStream::new(4);
        assert!(make_weights(&mut s, 10, 3, 2, 4, 1.0).is_err());
        assert!(make_weights(&mut s, 10, 3, 0, 2, 1.0).is_err());
        assert!(make_weights(&mut s, 10, 3, 3, 2, 1.0).is_err());
        assert!(make_weights(&mut s, 10, 3, 1, 2, 0.0).is_err());
    }

    #[test]
    fn from_csr_rejects_broken_rows() {
        assert!(BlendWeights::from_csr(vec![0, 2], vec![0, 1], vec![0.5, 0.6], 2, 1, 2).is_err());
        assert!(BlendWeights::from_csr(vec![0, 2], vec![1, 1], vec![0.5, 0.5], 2, 1, 2).is_err());
        assert!(BlendWeights::from_csr(vec![0, 2], vec![0, 2], vec![0.5, 0.5], 2, 1, 2).is_err());
        assert!(BlendWeights::from_csr(vec![0, 1], vec![0], vec![1.0], 2, 2, 3).is_err());
    }

    #[test]
    fn shape_mismatch() {
        let w = weights(&[&[(0, 1.0)]], 2);
        assert!(blend(array![[1.0, 2.0, 3.0]].view(), &w, BlendMode::Linear).is_err());
    }
}
