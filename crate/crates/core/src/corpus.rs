//! Seeded corpora of band-limited test functions.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dyadic::{check_grid_size, GridFunction};
use crate::{Error, Result};

/// Recipe for a reproducible corpus on a grid of size `grid`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusSpec {
    pub grid: usize,
    /// Number of random band-limited members.
    #[serde(default = "default_random")]
    pub random: usize,
    /// Highest frequency carried by the random members.
    #[serde(default = "default_bandwidth")]
    pub bandwidth: usize,
    /// Coefficient decay exponent: `|c_k| ~ (1 + |k|)^{-decay}`.
    #[serde(default = "default_decay")]
    pub decay: f64,
    /// Adds `e_k` for `0 <= k <= max_exponential` when set.
    #[serde(default)]
    pub max_exponential: Option<usize>,
    #[serde(default)]
    pub seed: u64,
}

fn default_random() -> usize {
    50
}

fn default_bandwidth() -> usize {
    64
}

fn default_decay() -> f64 {
    1.0
}

impl CorpusSpec {
    pub fn new(grid: usize) -> Self {
        Self {
            grid,
            random: default_random(),
            bandwidth: default_bandwidth(),
            decay: default_decay(),
            max_exponential: None,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_grid_size(self.grid)?;
        if self.random == 0 && self.max_exponential.is_none() {
            return Err(Error::EmptyCorpus);
        }
        if self.bandwidth >= self.grid / 2 {
            return Err(Error::param(format!(
                "bandwidth {} must be below N/2 = {}",
                self.bandwidth,
                self.grid / 2
            )));
        }
        if let Some(k) = self.max_exponential {
            if k >= self.grid / 2 {
                return Err(Error::param(format!(
                    "exponential e_{k} not representable on a grid of {}",
                    self.grid
                )));
            }
        }
        Ok(())
    }

    pub fn build(&self) -> Result<Vec<GridFunction>> {
        self.validate()?;
        let mut out = random_band_limited(
            self.grid,
            self.random,
            self.bandwidth,
            self.decay,
            self.seed,
        )?;
        if let Some(kmax) = self.max_exponential {
            for k in 0..=kmax {
                out.push(GridFunction::exponential(self.grid, k as i64)?);
            }
        }
        Ok(out)
    }
}

/// `count` random functions with coefficients supported on `|k| <= bandwidth`.
///
/// Member `i` depends only on `(seed, i)`, so a longer corpus extends a shorter one.
pub fn random_band_limited(
    n: usize,
    count: usize,
    bandwidth: usize,
    decay: f64,
    seed: u64,
) -> Result<Vec<GridFunction>> {
    check_grid_size(n)?;
    let band = bandwidth.min(n / 2 - 1) as i64;
    (0..count)
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let modes: Vec<(i64, Complex64)> = (-band..=band)
                .map(|k| {
                    let scale = (1.0 + k.abs() as f64).powf(-decay);
                    let re: f64 = rng.random_range(-1.0..1.0);
                    let im: f64 = rng.random_range(-1.0..1.0);
                    (k, Complex64::new(re, im) * scale)
                })
                .collect();
            GridFunction::from_modes(n, &modes)
        })
        .collect()
}
