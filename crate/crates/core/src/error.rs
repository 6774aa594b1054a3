use thiserror::Error;

/// Errors reported by the library. Every failure mode is a distinct variant so
/// callers (and the command-line front end) can map them to exit codes.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("exponential series requires a zero constant term")]
    NonzeroConstantTerm,

    #[error("logarithm requires constant term 1")]
    ConstantTermNotOne,

    #[error("interpolation nodes {0} and {1} coincide")]
    CoincidentNodes(usize, usize),

    #[error("rank([X,Y] - I) = {rank} exceeds 1 (singular values {singular_values:?})")]
    RankViolation {
        rank: usize,
        singular_values: Vec<f64>,
    },

    #[error("eigenvalue iteration failed: {0}")]
    EigenFailure(String),

    #[error("eigenvalues of X collide (minimum gap {min_gap:e}); apply taka_find first")]
    EigenCollision { min_gap: f64 },

    #[error("no diagonalizing polynomial found after {tries} tries (best relative gap {best_gap:e})")]
    SearchExhausted { tries: usize, best_gap: f64 },

    #[error("ill-conditioned computation: {0}")]
    Conditioning(String),

    #[error("polynomial does not split over the scalar field: {0}")]
    NotSplit(String),

    #[error("evaluation point excluded: {0}")]
    ExcludedPoint(String),

    #[error("span did not stabilise up to degree {degree}; increase the degree bound")]
    NoStabilization { degree: usize },

    #[error("truncation too shallow: {0}")]
    Truncation(String),

    #[error("operation undefined: {0}")]
    Undefined(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
