use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("grid size {0} must be a power of two and at least 8")]
    InvalidGridSize(usize),

    #[error("grid size mismatch: expected {expected}, found {found}")]
    GridMismatch { expected: usize, found: usize },

    #[error("negative block index {0}")]
    NegativeBlockIndex(i64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("map is not expanding: {0}")]
    NotExpanding(String),

    #[error("root finder did not converge for target {target} on branch {branch}")]
    RootNotConverged { branch: usize, target: f64 },

    #[error("periodic-point contraction did not converge for word {0:?}")]
    ContractionNotConverged(Vec<u8>),

    #[error("periodic orbit enumeration needs {needed} words, budget is {budget}")]
    OrbitBudgetExceeded { needed: u128, budget: u128 },

    #[error("weight vanishes or is too small (|g| = {0:e}); logarithm undefined")]
    WeightHasZeros(f64),

    #[error("quadrature did not converge (last relative change {0:e})")]
    QuadratureNotConverged(f64),

    #[error("block pair (n={n}, l={l}) is not separated under Lambda={lambda}")]
    NotSeparated { n: u32, l: u32, lambda: f64 },

    #[error("empty corpus")]
    EmptyCorpus,

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors caused by invalid input rather than a failed computation.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidGridSize(_)
                | Error::GridMismatch { .. }
                | Error::NegativeBlockIndex(_)
                | Error::InvalidParameter(_)
                | Error::NotExpanding(_)
                | Error::WeightHasZeros(_)
                | Error::NotSeparated { .. }
                | Error::EmptyCorpus
                | Error::Config(_)
        )
    }

    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
