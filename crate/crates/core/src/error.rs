use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    /// An oracle or objective produced a NaN or infinite value.
    #[error("non-finite value produced by {0}")]
    NumericOverflow(&'static str),

    #[error("point lies outside the feasible domain")]
    DomainViolation,

    #[error("numeric failure: {0}")]
    NumericFailure(String),

    /// The backtracking inner cycle hit its trial cap without accepting a step.
    #[error("line search stalled at iteration {iteration} after {trials} trials (last trial L = {last_l:e})")]
    LineSearchStall {
        iteration: usize,
        trials: usize,
        last_l: f64,
    },

    /// The oracle-call budget does not allow another call.
    #[error("oracle-call budget of {0} exhausted")]
    BudgetExhausted(u64),

    #[error("configuration error: {0}")]
    Configuration(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("format error at line {line}: {message}")]
    Format { line: u64, message: String },

    #[error("partial write: {source} ({} files completed)", completed.len())]
    PartialWrite {
        completed: Vec<PathBuf>,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
