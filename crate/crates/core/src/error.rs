use thiserror::Error;

use crate::secular::ReducedSolution;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("starting vector is zero")]
    ZeroVector,

    #[error("block is rank deficient (column {column}, residual {residual:.3e})")]
    Rank { column: usize, residual: f64 },

    #[error("shifted matrix is not positive definite (pivot {index} = {pivot:.3e})")]
    NotPositiveDefinite { index: usize, pivot: f64 },

    #[error(
        "secular iteration did not converge after {iters} iterations (residual {residual:.3e})"
    )]
    NotConverged {
        iters: usize,
        residual: f64,
        best: Box<ReducedSolution>,
    },

    #[error("internal invariant violated: {0}")]
    InternalInvariantViolation(String),

    #[error("dimension {dim} exceeds the dense cap of {cap}")]
    TooLarge { dim: usize, cap: usize },

    #[error("equivalent trust-region radius is zero")]
    DegenerateRadius,

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("minimax certificate failure: {0}")]
    Certificate(String),

    #[error("operator is not positive semidefinite (smallest Ritz value {0:.3e})")]
    NotPsd(f64),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }
}
