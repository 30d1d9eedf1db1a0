//! Synthetic, ultra-high dimensional, multi-class feature spaces with
//! ground truth.
//!
//! A dataset is built in stages, each usable on its own:
//!
//! 1. [`location`] draws per-class locations for every hidden feature
//!    under an envelope, with controllable ordering and sharing across
//!    classes, plus a usefulness value per feature.
//! 2. [`sampler`] draws hidden values around those locations with a
//!    spread set by usefulness, then normalizes column magnitudes.
//! 3. [`polynomial`] expands hidden features into all monomials up to a
//!    degree, with roots that keep their scale.
//! 4. [`blend`] mixes transitional features into many visible ones via a
//!    sparse Dirichlet weight matrix, linearly or multiplicatively.
//! 5. [`noise`] interpolates each visible feature with matched Gaussian
//!    noise.
//!
//! [`pipeline::run_pipeline`] chains the stages from a
//! [`config::GeneratorConfig`]; [`io`] stores the result in HDF5 or CSV;
//! [`eval`] measures how much feature screening helps a nearest-neighbour
//! classifier on it.

pub mod blend;
pub mod config;
pub mod error;
pub mod eval;
pub mod io;
pub mod location;
pub mod noise;
pub mod pipeline;
pub mod polynomial;
pub mod rng;
pub mod sampler;
pub mod stats;

pub use config::{validate_config, GeneratorConfig, RawConfig};
pub use error::{Error, Result};
pub use io::{read_hdf5, write_hdf5, DatasetBundle};
pub use pipeline::run_pipeline;
pub use rng::RandomStream;
