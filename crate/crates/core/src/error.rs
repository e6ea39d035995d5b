use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("input is not unitary: max |U*U - I| = {deviation:e}")]
    NonUnitaryInput { deviation: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid subsystem: k = {k} must satisfy 1 <= k <= n = {n}")]
    InvalidSubsystem { k: usize, n: usize },

    #[error("eigenvalues of JM do not form +/- i pairs (residual {residual:e}, tolerance {tolerance:e})")]
    PairingFailure { residual: f64, tolerance: f64 },

    #[error("invalid covariance matrix: {0}")]
    InvalidCovariance(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid squeezing spectrum: {0}")]
    InvalidSqueezing(String),

    #[error("partition sizes differ: |lambda| = {left}, |mu| = {right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("Young diagram has {rows} rows but n = {n}")]
    RowOverflow { rows: usize, n: usize },

    #[error("dimension too small: n = {n}, need n >= {required}")]
    DimensionTooSmall { n: usize, required: usize },

    #[error("unsupported order p = {p} (max {max})")]
    UnsupportedOrder { p: usize, max: usize },

    #[error("Gram matrix is singular")]
    SingularGram,

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("energy {energy} is below the minimum 2n = {minimum}")]
    EnergyTooSmall { energy: f64, minimum: f64 },

    #[error("invalid configuration: {0}")]
    InvalidSpec(String),

    #[error("{failed} of {total} trials failed, above the 0.1% budget")]
    FailureBudgetExceeded { failed: usize, total: usize },

    #[error("Markov bound violated at threshold {threshold}: exceedance {fraction} > {bound}")]
    MarkovViolation {
        threshold: f64,
        fraction: f64,
        bound: f64,
    },

    #[error("failed to build worker pool: {0}")]
    WorkerPool(String),

    #[error("malformed trial CSV: {0}")]
    MalformedCsv(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Stream(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
