//! Screening statistics and a cross-validated nearest-neighbour check.
//!
//! The harness ranks visible features by their one-way ANOVA F-score,
//! keeps the best `k` for each requested `k`, and reports stratified
//! k-fold accuracy of a k-nearest-neighbour vote on standardized features.
//! A dataset with a real screening effect scores far better on the top
//! features than on the full feature space.

use std::path::Path;

use ndarray::{Array2, ArrayView2, Axis};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::GeneratorConfig;
use crate::error::{Error, Result};
use crate::io::DatasetBundle;
use crate::rng::RandomStream;

/// Stands in for an infinite F-score (zero within-class variance).
pub const INFINITE_F_SCORE: f64 = f64::MAX;

fn class_index(labels: &[u32]) -> (Vec<u32>, Vec<usize>) {
    let mut classes: Vec<u32> = labels.to_vec();
    classes.sort_unstable();
    classes.dedup();
    let idx = labels.iter().map(|l| classes.binary_search(l).unwrap()).collect();
    (classes, idx)
}

/// One-way ANOVA F-statistic of every column against the labels.
pub fn anova_f_scores(features: ArrayView2<'_, f64>, labels: &[u32]) -> Result<Vec<f64>> {
    if labels.len() != features.nrows() {
        return Err(Error::invalid(format!("{} labels for {} samples", labels.len(), features.nrows())));
    }
    let (classes, idx) = class_index(labels);
    let c = classes.len();
    if c < 2 {
        return Err(Error::invalid("ANOVA needs at least two classes"));
    }
    let n = labels.len();
    if n <= c {
        return Err(Error::invalid("ANOVA needs more samples than classes"));
    }
    let mut counts = vec![0usize; c];
    for &k in &idx {
        counts[k] += 1;
    }
    let scores = features
        .axis_iter(Axis(1))
        .into_par_iter()
        .map(|col| {
            let (lo, hi) = col.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
            if lo == hi {
                return 0.0;
            }
            let mut sums = vec![0.0; c];
            for (&x, &k) in col.iter().zip(&idx) {
                sums[k] += x;
            }
            let grand = sums.iter().sum::<f64>() / n as f64;
            let means: Vec<f64> = sums.iter().zip(&counts).map(|(s, &m)| s / m as f64).collect();
            let between: f64 = means.iter().zip(&counts).map(|(m, &k)| k as f64 * (m - grand).powi(2)).sum();
            let within: f64 = col.iter().zip(&idx).map(|(&x, &k)| (x - means[k]).powi(2)).sum();
            if within == 0.0 {
                return INFINITE_F_SCORE;
            }
            let f = (between / (c - 1) as f64) / (within / (n - c) as f64);
            f.min(INFINITE_F_SCORE)
        })
        .collect();
    Ok(scores)
}

/// Feature indices ordered by descending F-score, ties by lower index.
pub fn rank_features(scores: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    order
}

/// Stratified fold assignment: each class's samples are shuffled and dealt
/// round-robin over the folds.
fn assign_folds(labels: &[u32], folds: usize, seed: u64) -> Result<Vec<usize>> {
    let (classes, idx) = class_index(labels);
    let mut stream = RandomStream::new(seed).fork("folds")?;
    let mut fold_of = vec![0; labels.len()];
    for (k, class) in classes.iter().enumerate() {
        let mut members: Vec<usize> = (0..labels.len()).filter(|&i| idx[i] == k).collect();
        if members.len() < folds {
            return Err(Error::invalid(format!(
                "class {class} has {} samples, fewer than the {folds} folds",
                members.len()
            )));
        }
        stream.fork(&format!("class-{class}"))?.shuffle(&mut members);
        for (pos, i) in members.into_iter().enumerate() {
            fold_of[i] = pos % folds;
        }
    }
    Ok(fold_of)
}

fn standardize(m: &Array2<f64>, mean: &[f64], sd: &[f64]) -> Array2<f64> {
    let mut out = m.clone();
    for mut row in out.rows_mut() {
        for ((x, mu), s) in row.iter_mut().zip(mean).zip(sd) {
            *x = (*x - mu) / s;
        }
    }
    out
}

/// Accuracy on one held-out fold. `columns` restricts both sides to a
/// feature subset chosen from that fold's training rows.
#[allow(clippy::too_many_arguments)]
fn fold_accuracy(
    features: ArrayView2<'_, f64>,
    class_of: &[usize],
    n_classes: usize,
    fold_of: &[usize],
    fold: usize,
    k: usize,
    columns: Option<&[usize]>,
) -> f64 {
    let train: Vec<usize> = (0..fold_of.len()).filter(|&i| fold_of[i] != fold).collect();
    let test: Vec<usize> = (0..fold_of.len()).filter(|&i| fold_of[i] == fold).collect();
    let (train_x, test_x) = match columns {
        Some(cols) => {
            let sub = features.select(Axis(1), cols);
            (sub.select(Axis(0), &train), sub.select(Axis(0), &test))
        }
        None => (features.select(Axis(0), &train), features.select(Axis(0), &test)),
    };
    let n = train.len() as f64;
    let mean: Vec<f64> = train_x.axis_iter(Axis(1)).map(|c| c.sum() / n).collect();
    let sd: Vec<f64> = train_x
        .axis_iter(Axis(1))
        .zip(&mean)
        .map(|(c, m)| {
            let s = (c.iter().map(|x| (x - m).powi(2)).sum::<f64>() / n).sqrt();
            if s > 0.0 {
                s
            } else {
                1.0
            }
        })
        .collect();
    let train_x = standardize(&train_x, &mean, &sd);
    let test_x = standardize(&test_x, &mean, &sd);
    let k = k.min(train.len());

    let correct: usize = test_x
        .axis_iter(Axis(0))
        .into_par_iter()
        .zip(test.par_iter())
        .filter(|(x, &i)| {
            let mut dist: Vec<(f64, usize)> = train_x
                .axis_iter(Axis(0))
                .enumerate()
                .map(|(t, row)| (row.iter().zip(x.iter()).map(|(a, b)| (a - b) * (a - b)).sum::<f64>(), t))
                .collect();
            // Train rows are in ascending sample order, so the position breaks
            // distance ties toward the lower sample index.
            dist.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            let mut votes = vec![0usize; n_classes];
            for &(_, t) in &dist[..k] {
                votes[class_of[train[t]]] += 1;
            }
            let best = votes.iter().enumerate().max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0))).unwrap().0;
            best == class_of[i]
        })
        .count();
    correct as f64 / test.len() as f64
}

struct Folds {
    fold_of: Vec<usize>,
    class_of: Vec<usize>,
    n_classes: usize,
    count: usize,
}

impl Folds {
    fn new(labels: &[u32], n_rows: usize, k: usize, folds: usize, seed: u64) -> Result<Self> {
        if labels.len() != n_rows {
            return Err(Error::invalid(format!("{} labels for {n_rows} samples", labels.len())));
        }
        if k == 0 {
            return Err(Error::invalid("need at least one neighbour"));
        }
        if folds < 2 {
            return Err(Error::invalid(format!("need at least 2 folds, got {folds}")));
        }
        let fold_of = assign_folds(labels, folds, seed)?;
        let (classes, class_of) = class_index(labels);
        Ok(Folds { fold_of, class_of, n_classes: classes.len(), count: folds })
    }

    /// F-score ranking of the features on each fold's training rows.
    fn rankings(&self, features: ArrayView2<'_, f64>, labels: &[u32]) -> Result<Vec<Vec<usize>>> {
        (0..self.count)
            .map(|f| {
                let train: Vec<usize> = (0..labels.len()).filter(|&i| self.fold_of[i] != f).collect();
                let train_labels: Vec<u32> = train.iter().map(|&i| labels[i]).collect();
                let scores = anova_f_scores(features.select(Axis(0), &train).view(), &train_labels)?;
                Ok(rank_features(&scores))
            })
            .collect()
    }

    fn accuracy(&self, features: ArrayView2<'_, f64>, k: usize, keep: Option<(&[Vec<usize>], usize)>) -> f64 {
        let total: f64 = (0..self.count)
            .map(|f| {
                let columns = keep.map(|(ranks, m)| &ranks[f][..m.min(ranks[f].len())]);
                fold_accuracy(features, &self.class_of, self.n_classes, &self.fold_of, f, k, columns)
            })
            .sum();
        total / self.count as f64
    }
}

/// Mean stratified cross-validated accuracy of a `k`-nearest-neighbour
/// majority vote (Euclidean distance on features standardized with training
/// fold statistics). Vote ties go to the lower class label.
pub fn knn_accuracy(features: ArrayView2<'_, f64>, labels: &[u32], k: usize, folds: usize, seed: u64) -> Result<f64> {
    let folds = Folds::new(labels, features.nrows(), k, folds, seed)?;
    Ok(folds.accuracy(features, k, None))
}

/// Like [`knn_accuracy`], but each fold keeps only the `keep` features with
/// the highest F-scores on its own training rows. Ranking on all rows would
/// let the held-out samples vote on the selection and inflate the accuracy.
pub fn screened_knn_accuracy(
    features: ArrayView2<'_, f64>,
    labels: &[u32],
    keep: usize,
    k: usize,
    folds: usize,
    seed: u64,
) -> Result<f64> {
    let folds = Folds::new(labels, features.nrows(), k, folds, seed)?;
    let ranks = folds.rankings(features, labels)?;
    Ok(folds.accuracy(features, k, Some((&ranks, keep))))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScreeningPoint {
    pub k: usize,
    pub selected: Vec<usize>,
    /// One accuracy per entry of [`ScreeningReport::neighbors`].
    pub accuracy: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScreeningReport {
    pub f_scores: Vec<f64>,
    pub folds: usize,
    pub neighbors: Vec<usize>,
    pub curve: Vec<ScreeningPoint>,
    pub unreduced: Vec<f64>,
    /// Accuracy on the true hidden features, when the hidden matrix is stored.
    pub true_features: Option<Vec<f64>>,
    pub warnings: Vec<String>,
}

impl ScreeningReport {
    /// Best screened accuracy over the curve for `neighbors[which]`.
    pub fn best_screened(&self, which: usize) -> f64 {
        self.curve.iter().map(|p| p.accuracy[which]).fold(f64::NEG_INFINITY, f64::max)
    }
}

#[derive(Debug, Clone)]
pub struct ScreeningOptions {
    pub k_list: Vec<usize>,
    pub folds: usize,
    pub neighbors: Vec<usize>,
    pub seed: u64,
}

impl Default for ScreeningOptions {
    fn default() -> Self {
        ScreeningOptions { k_list: vec![10, 25, 50, 100, 200, 400, 800], folds: 4, neighbors: vec![1, 5], seed: 0 }
    }
}

/// Runs the screening curve over `bundle`. Reported selections and
/// F-scores use every sample; accuracies select within each training fold.
pub fn screening_curve(bundle: &DatasetBundle, options: &ScreeningOptions) -> Result<ScreeningReport> {
    if options.neighbors.is_empty() {
        return Err(Error::invalid("no neighbour counts requested"));
    }
    let features = bundle.visible.view();
    let labels = &bundle.labels;
    let folds = Folds::new(labels, features.nrows(), options.neighbors[0], options.folds, options.seed)?;
    if options.neighbors.contains(&0) {
        return Err(Error::invalid("need at least one neighbour"));
    }
    let accuracies = |m: ArrayView2<'_, f64>, keep: Option<(&[Vec<usize>], usize)>| -> Vec<f64> {
        options.neighbors.iter().map(|&k| folds.accuracy(m, k, keep)).collect()
    };

    let f_scores = anova_f_scores(features, labels)?;
    let order = rank_features(&f_scores);
    let fold_ranks = folds.rankings(features, labels)?;
    let mut warnings = Vec::new();
    let mut curve = Vec::with_capacity(options.k_list.len());
    for &k in &options.k_list {
        let kept = k.min(order.len());
        if kept < k {
            warnings.push(format!("k = {k} exceeds the {} available features; clipped", order.len()));
        }
        let accuracy = accuracies(features, Some((&fold_ranks, kept)));
        curve.push(ScreeningPoint { k: kept, selected: order[..kept].to_vec(), accuracy });
    }
    let unreduced = accuracies(features, None);
    let true_features = bundle.true_hidden().map(|t| accuracies(t.view(), None));
    Ok(ScreeningReport {
        f_scores,
        folds: options.folds,
        neighbors: options.neighbors.clone(),
        curve,
        unreduced,
        true_features,
        warnings,
    })
}

/// JSON document written by `validate --report`.
#[derive(Serialize)]
pub struct ValidationReport<'a> {
    pub config: &'a GeneratorConfig,
    pub screening: &'a ScreeningReport,
}

pub fn write_report(path: impl AsRef<Path>, config: &GeneratorConfig, report: &ScreeningReport) -> Result<()> {
    let path = path.as_ref();
    let doc = ValidationReport { config, screening: report };
    let text = serde_json::to_string_pretty(&doc).map_err(|e| Error::Internal(format!("report: {e}")))?;
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn f_score_edge_cases() {
        let x = array![[0.0, 3.0], [0.0, 3.0], [1.0, 3.0], [1.0, 3.0]];
        let f = anova_f_scores(x.view(), &[1, 1, 2, 2]).unwrap();
        assert_eq!(f, vec![INFINITE_F_SCORE, 0.0]);
        assert!(anova_f_scores(x.view(), &[1, 1, 1, 1]).is_err());
    }

    #[test]
    fn f_score_matches_hand_computation() {
        // Groups [1, 2, 3] and [4, 5, 6]: SSB = 13.5, SSW = 4, F = 13.5 / (4 / 4).
        let x = array![[1.0], [2.0], [3.0], [4.0], [5.0], [6.0]];
        let f = anova_f_scores(x.view(), &[1, 1, 1, 2, 2, 2]).unwrap();
        assert!((f[0] - 13.5).abs() < 1e-12);
    }

    #[test]
    fn ranking_breaks_ties_by_index() {
        assert_eq!(rank_features(&[1.0, 5.0, 5.0, 0.0]), vec![1, 2, 0, 3]);
    }

    #[test]
    fn separable_data_is_classified_perfectly() {
        let mut s = RandomStream::new(1);
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for i in 0..40 {
            let class = (i % 2) as u32 + 1;
            rows.push(if class == 1 { 0.0 } else { 100.0 } + s.next_normal(0.0, 0.1));
            labels.push(class);
        }
        let x = Array2::from_shape_vec((40, 1), rows).unwrap();
        assert_eq!(knn_accuracy(x.view(), &labels, 1, 4, 0).unwrap(), 1.0);
    }

    #[test]
    fn knn_argument_errors() {
        let x = Array2::<f64>::zeros((6, 2));
        let labels = [1, 1, 1, 2, 2, 2];
        assert!(knn_accuracy(x.view(), &labels, 1, 4, 0).is_err());
        assert!(knn_accuracy(x.view(), &labels, 0, 2, 0).is_err());
        assert!(knn_accuracy(x.view(), &labels, 1, 1, 0).is_err());
    }

    #[test]
    fn folds_are_stratified() {
        let labels: Vec<u32> = (0..60).map(|i| (i % 3) as u32 + 1).collect();
        let folds = assign_folds(&labels, 4, 9).unwrap();
        for class in 1..=3 {
            for f in 0..4 {
                let n = (0..60).filter(|&i| labels[i] == class && folds[i] == f).count();
                assert!(n == 5, "class {class} fold {f}: {n}");
            }
        }
    }

    #[test]
    fn vote_ties_go_to_lower_class() {
        // Each test point has one neighbour of each class at equal distance.
        let x = array![[0.0], [-1.0], [1.0], [0.0], [-1.0], [1.0]];
        let labels = [1, 1, 2, 2, 1, 2];
        let acc = knn_accuracy(x.view(), &labels, 2, 2, 3).unwrap();
        assert!((0.0..=1.0).contains(&acc));
    }
}
