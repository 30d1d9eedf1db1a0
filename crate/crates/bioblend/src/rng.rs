//! Seeded random streams and the samplers the pipeline stages draw from.
//!
//! A [`RandomStream`] is a ChaCha8 generator keyed by a 256-bit digest.
//! Forking a child hashes the parent key together with a label, so a
//! child depends only on `(parent key, label)` and never on how many
//! values the parent (or any sibling) has already produced. Each pipeline
//! stage owns its own child, which keeps one stage's output fixed when
//! another stage changes how much it draws.

use std::collections::HashSet;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, Geometric, StandardNormal};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

const ROOT_DOMAIN: &[u8] = b"bioblend/root/v1";

pub struct RandomStream {
    seed: u64,
    key: [u8; 32],
    rng: ChaCha8Rng,
    forked: HashSet<String>,
}

impl RandomStream {
    pub fn new(seed: u64) -> Self {
        let mut hasher = Sha256::new();
        hasher.update(ROOT_DOMAIN);
        hasher.update(seed.to_le_bytes());
        Self::from_key(seed, hasher.finalize().into())
    }

    fn from_key(seed: u64, key: [u8; 32]) -> Self {
        RandomStream {
            seed,
            key,
            rng: ChaCha8Rng::from_seed(key),
            forked: HashSet::new(),
        }
    }

    /// Seed of the root stream this one descends from.
    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Derives an independent child stream from this stream's key and `label`.
    ///
    /// Each label may be forked once per parent; a repeat is reported as a
    /// configuration error because two stages would silently share draws.
    pub fn fork(&mut self, label: &str) -> Result<RandomStream> {
        if label.is_empty() {
            return Err(Error::Config(vec!["random stream label must be nonempty".into()]));
        }
        if !self.forked.insert(label.to_owned()) {
            return Err(Error::Config(vec![format!(
                "random stream label {label:?} forked twice from the same parent"
            )]));
        }
        let mut hasher = Sha256::new();
        hasher.update(self.key);
        hasher.update((label.len() as u64).to_le_bytes());
        hasher.update(label.as_bytes());
        Ok(Self::from_key(self.seed, hasher.finalize().into()))
    }

    /// Forks one child per index, labelled `"{prefix}-{i}"`.
    pub fn fork_many(&mut self, prefix: &str, count: usize) -> Result<Vec<RandomStream>> {
        (0..count).map(|i| self.fork(&format!("{prefix}-{i}"))).collect()
    }

    /// A uniform double in `[0, 1)`.
    pub fn next_f64(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    pub fn next_normal(&mut self, mean: f64, scale: f64) -> f64 {
        let z: f64 = StandardNormal.sample(&mut self.rng);
        mean + scale * z
    }

    pub fn draw_normal(&mut self, mean: f64, scale: f64, n: usize) -> Result<Vec<f64>> {
        check_scale("normal scale", scale)?;
        if scale == 0.0 {
            return Ok(vec![mean; n]);
        }
        Ok((0..n).map(|_| self.next_normal(mean, scale)).collect())
    }

    /// Draws from `[location, location + length)`.
    pub fn draw_uniform(&mut self, location: f64, length: f64, n: usize) -> Result<Vec<f64>> {
        check_scale("uniform length", length)?;
        if length == 0.0 {
            return Ok(vec![location; n]);
        }
        Ok((0..n).map(|_| location + length * self.next_f64()).collect())
    }

    /// Symmetric Dirichlet sample of dimension `k`, built from normalized
    /// Gamma(concentration, 1) draws.
    pub fn draw_dirichlet(&mut self, concentration: f64, k: usize) -> Result<Vec<f64>> {
        if k == 0 {
            return Err(Error::invalid("Dirichlet dimension must be at least 1"));
        }
        if !(concentration > 0.0 && concentration.is_finite()) {
            return Err(Error::invalid(format!(
                "Dirichlet concentration must be positive, got {concentration}"
            )));
        }
        if k == 1 {
            return Ok(vec![1.0]);
        }
        let gamma = Gamma::new(concentration, 1.0)
            .map_err(|e| Error::invalid(format!("Gamma({concentration}, 1): {e}")))?;
        loop {
            let draws: Vec<f64> = (0..k).map(|_| gamma.sample(&mut self.rng)).collect();
            // Small concentrations can underflow a component to zero.
            if draws.iter().any(|&g| g <= 0.0) {
                continue;
            }
            let total: f64 = draws.iter().sum();
            return Ok(draws.into_iter().map(|g| g / total).collect());
        }
    }

    /// Integers drawn uniformly from `lo..=hi`.
    pub fn draw_discrete_uniform(&mut self, lo: i64, hi: i64, n: usize) -> Result<Vec<i64>> {
        if lo > hi {
            return Err(Error::invalid(format!("empty integer range {lo}..={hi}")));
        }
        Ok((0..n).map(|_| self.rng.random_range(lo..=hi)).collect())
    }

    /// A run length on `{1, 2, ...}` with the given mean (geometric law).
    pub fn draw_run_length(&mut self, mean: f64) -> usize {
        if mean <= 1.0 {
            return 1;
        }
        let failures = Geometric::new(1.0 / mean)
            .expect("probability in (0, 1)")
            .sample(&mut self.rng);
        1 + failures as usize
    }

    /// `k` distinct indices from `0..n`, in ascending order.
    pub fn choose_distinct(&mut self, n: usize, k: usize) -> Result<Vec<usize>> {
        if k > n {
            return Err(Error::invalid(format!("cannot choose {k} distinct values out of {n}")));
        }
        let mut picked = index::sample(&mut self.rng, n, k).into_vec();
        picked.sort_unstable();
        Ok(picked)
    }

    /// Fisher-Yates shuffle.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.rng.random_range(0..=i);
            items.swap(i, j);
        }
    }
}

fn check_scale(what: &str, scale: f64) -> Result<()> {
    if scale >= 0.0 && scale.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("{what} must be finite and nonnegative, got {scale}")))
    }
}
