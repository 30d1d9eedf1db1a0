//! Independent brute-force oracles for the combinatorial and algebraic stages.

use bioblend::blend::{blend, make_weights, BlendMode, BlendWeights, Positivity};
use bioblend::polynomial::{count_transitional, expand, signed_root, Monomials};
use bioblend::RandomStream;
use ndarray::{Array2, Axis};
use proptest::prelude::*;

/// Every nondecreasing index tuple of each degree, found by walking all
/// `f^g` sequences in odometer order and discarding unsorted ones.
fn brute_monomials(f: usize, d: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for g in 1..=d {
        let total = f.pow(g as u32);
        for code in 0..total {
            let mut seq = vec![0; g];
            let mut c = code;
            for slot in seq.iter_mut().rev() {
                *slot = c % f;
                c /= f;
            }
            if seq.windows(2).all(|w| w[0] <= w[1]) {
                out.push(seq);
            }
        }
    }
    out
}

fn binomial(n: u64, k: u64) -> u64 {
    (1..=k).fold(1, |acc, i| acc * (n + 1 - i) / i)
}

#[test]
fn monomial_enumeration_matches_brute_force() {
    for f in 1..=6 {
        for d in 1..=4 {
            let brute = brute_monomials(f, d);
            let m = Monomials::new(f, d).unwrap();
            assert_eq!(m.terms(), brute.as_slice(), "f={f} d={d}");
            assert_eq!(count_transitional(f, d).unwrap(), brute.len());
            assert_eq!(brute.len() as u64, binomial((f + d) as u64, d as u64) - 1);
        }
    }
}

#[test]
fn expansion_matches_naive_products() {
    let mut s = RandomStream::new(5);
    let x = Array2::from_shape_vec((5, 3), s.draw_normal(0.0, 2.0, 15).unwrap()).unwrap();
    let out = expand(x.view(), 3).unwrap();
    let terms = brute_monomials(3, 3);
    assert_eq!(out.ncols(), terms.len());
    for i in 0..5 {
        for (c, term) in terms.iter().enumerate() {
            let p: f64 = term.iter().map(|&j| x[[i, j]]).product();
            let want = p.signum() * p.abs().powf(1.0 / term.len() as f64);
            let got = out[[i, c]];
            assert!((got - want).abs() <= 1e-12 * want.abs().max(1.0), "row {i} term {term:?}: {got} vs {want}");
        }
    }
}

#[test]
fn linear_blend_matches_dense_product() {
    let mut s = RandomStream::new(8);
    let x = Array2::from_shape_vec((50, 40), s.draw_normal(1.0, 3.0, 2000).unwrap()).unwrap();
    let w = make_weights(&mut s, 30, 40, 1, 6, 0.7).unwrap();
    let got = blend(x.view(), &w, BlendMode::Linear).unwrap();
    let want = x.dot(&w.to_dense().t());
    let worst = (&got - &want).iter().fold(0.0f64, |m, d| m.max(d.abs()));
    assert!(worst < 1e-10, "{worst}");
}

#[test]
fn logarithmic_blend_is_a_weighted_geometric_mean() {
    let mut s = RandomStream::new(9);
    let x = Array2::from_shape_vec((20, 12), s.draw_uniform(0.1, 5.0, 240).unwrap()).unwrap();
    let w = make_weights(&mut s, 7, 12, 2, 5, 1.0).unwrap();
    let got = blend(x.view(), &w, BlendMode::Logarithmic(Positivity::Shift(0.0))).unwrap();
    for i in 0..20 {
        for j in 0..7 {
            let (idx, wt) = w.row(j);
            let want = idx.iter().zip(wt).map(|(&t, &v)| v * x[[i, t]].ln()).sum::<f64>().exp();
            assert!((got[[i, j]] - want).abs() <= 1e-12 * want, "{i},{j}");
        }
    }

    let c = Array2::from_elem((3, 12), 2.5);
    let same = blend(c.view(), &w, BlendMode::Logarithmic(Positivity::Shift(0.0))).unwrap();
    assert!(same.iter().all(|v| (v - 2.5).abs() < 1e-12));
}

#[test]
fn linear_blend_means_are_convex_combinations() {
    let mut s = RandomStream::new(10);
    let mut x = Array2::zeros((200, 6));
    for (j, mut col) in x.axis_iter_mut(Axis(1)).enumerate() {
        col.assign(&ndarray::Array1::from(s.draw_normal(j as f64 * 3.0 - 4.0, 1.0, 200).unwrap()));
    }
    let means: Vec<f64> = x.axis_iter(Axis(1)).map(|c| c.mean().unwrap()).collect();
    let w = make_weights(&mut s, 50, 6, 1, 6, 1.0).unwrap();
    let out = blend(x.view(), &w, BlendMode::Linear).unwrap();
    for j in 0..50 {
        let (idx, _) = w.row(j);
        let lo = idx.iter().map(|&t| means[t]).fold(f64::INFINITY, f64::min);
        let hi = idx.iter().map(|&t| means[t]).fold(f64::NEG_INFINITY, f64::max);
        let m = out.column(j).mean().unwrap();
        assert!(m >= lo - 1e-12 && m <= hi + 1e-12, "{m} outside [{lo}, {hi}]");
    }
}

fn check_weights(w: &BlendWeights, f_vis: usize, f_trans: usize, k_min: usize, k_max: usize) {
    assert_eq!(w.n_visible(), f_vis);
    assert!(w.row_offsets().windows(2).all(|p| p[0] <= p[1]));
    for j in 0..f_vis {
        let (idx, val) = w.row(j);
        assert!((k_min..=k_max).contains(&idx.len()));
        assert!(idx.iter().all(|&t| t < f_trans));
        let mut sorted = idx.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), idx.len(), "repeated index in row {j}");
        assert!(val.iter().all(|&v| v > 0.0));
        assert!((val.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
    }
}

proptest! {
    #[test]
    fn signed_root_inverts_signed_powers(v in -1e6f64..1e6, g in 1usize..=6) {
        let p = v.abs().powi(g as i32);
        // The root recovers the value whenever the power keeps its sign.
        let signed = if g % 2 == 1 { v.signum() * p } else { p };
        let want = if g % 2 == 1 { v } else { v.abs() };
        let r = signed_root(signed, g);
        prop_assert!((r - want).abs() <= 1e-12 * want.abs().max(1e-300), "{} vs {}", r, want);
    }

    #[test]
    fn weights_lie_on_the_simplex(
        seed in any::<u64>(),
        f_vis in 1usize..60,
        f_trans in 1usize..40,
        lo in 1usize..5,
        span in 0usize..4,
        conc in 0.05f64..5.0,
    ) {
        let k_min = lo.min(f_trans);
        let k_max = (k_min + span).min(f_trans);
        let w = make_weights(&mut RandomStream::new(seed), f_vis, f_trans, k_min, k_max, conc).unwrap();
        check_weights(&w, f_vis, f_trans, k_min, k_max);
    }

    #[test]
    fn degree_one_expansion_is_the_input(seed in any::<u64>(), rows in 1usize..8, cols in 1usize..8) {
        let mut s = RandomStream::new(seed);
        let x = Array2::from_shape_vec((rows, cols), s.draw_normal(0.0, 10.0, rows * cols).unwrap()).unwrap();
        prop_assert_eq!(expand(x.view(), 1).unwrap(), x.clone());
        let m = Monomials::new(cols, 3).unwrap();
        let full = expand(x.view(), 3).unwrap();
        prop_assert_eq!(full.ncols(), m.len());
        prop_assert_eq!(full.slice(ndarray::s![.., ..cols]).to_owned(), x);
    }
}
