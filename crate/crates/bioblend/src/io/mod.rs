//! The generated dataset and its on-disk forms.
//!
//! HDF5 layout (format version [`FORMAT_VERSION`]):
//!
//! | path                  | type        | shape            |
//! |-----------------------|-------------|------------------|
//! | `/features`           | f64 LE      | `S x F_visible`  |
//! | `/labels`             | i64 LE      | `S`              |
//! | `/hidden/features`    | f64 LE      | `S x F_hidden` (optional) |
//! | `/hidden/usefulness`  | f64 LE      | `F_hidden`       |
//! | `/hidden/true_mask`   | u8          | `F_hidden`       |
//! | `/noise/alpha`        | f64 LE      | `F_visible`      |
//! | `/weights/row_offsets`| u64 LE      | `F_visible + 1`  |
//! | `/weights/indices`    | u64 LE      | nonzeros         |
//! | `/weights/values`     | f64 LE      | nonzeros         |
//!
//! Root attributes carry `version`, `seed`, `positivity_shift`, every
//! configuration field, and `config_json` with the full resolved
//! configuration. `/weights` carries `n_transitional`, `k_min` and `k_max`.

mod csv;
mod hdf5;

use ndarray::Array2;

use crate::blend::BlendWeights;
use crate::config::GeneratorConfig;
use crate::error::{Error, Result};

pub use self::csv::{export_csv, read_features_csv, read_labels_csv};
pub use self::hdf5::{read_hdf5, write_hdf5, FORMAT_VERSION};

/// Visible features, labels and the ground truth behind them.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetBundle {
    pub visible: Array2<f64>,
    /// Class of each sample, in `1..=C`.
    pub labels: Vec<u32>,
    pub hidden: Option<Array2<f64>>,
    pub usefulness: Vec<f64>,
    pub true_mask: Vec<bool>,
    pub alpha: Vec<f64>,
    pub weights: BlendWeights,
    pub config: GeneratorConfig,
    /// Shift added before the logarithmic blend; 0 otherwise.
    pub positivity_shift: f64,
}

impl DatasetBundle {
    pub fn n_samples(&self) -> usize {
        self.visible.nrows()
    }

    pub fn n_visible(&self) -> usize {
        self.visible.ncols()
    }

    pub fn n_hidden(&self) -> usize {
        self.usefulness.len()
    }

    /// Hidden columns of the true features, when the hidden matrix is stored.
    pub fn true_hidden(&self) -> Option<Array2<f64>> {
        let hidden = self.hidden.as_ref()?;
        let cols: Vec<usize> = (0..self.true_mask.len()).filter(|&j| self.true_mask[j]).collect();
        Some(hidden.select(ndarray::Axis(1), &cols))
    }

    pub fn validate(&self) -> Result<()> {
        let s = self.visible.nrows();
        let mut problems = Vec::new();
        if self.labels.len() != s {
            problems.push(format!("{} labels for {s} samples", self.labels.len()));
        }
        let c = self.config.n_labels as u32;
        if let Some(bad) = self.labels.iter().find(|&&l| l == 0 || l > c) {
            problems.push(format!("label {bad} outside [1, {c}]"));
        }
        if self.true_mask.len() != self.usefulness.len() {
            problems.push("true mask and usefulness lengths differ".into());
        }
        if let Some(h) = &self.hidden {
            if h.dim() != (s, self.usefulness.len()) {
                problems.push(format!("hidden matrix shape {:?} does not match ({s}, {})", h.dim(), self.usefulness.len()));
            }
        }
        if self.alpha.len() != self.visible.ncols() {
            problems.push(format!("{} alphas for {} visible features", self.alpha.len(), self.visible.ncols()));
        }
        if self.weights.n_visible() != self.visible.ncols() {
            problems.push(format!("{} weight rows for {} visible features", self.weights.n_visible(), self.visible.ncols()));
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::Internal(format!("inconsistent dataset bundle: {}", problems.join("; "))))
        }
    }
}
