use thiserror::Error;

/// Errors raised by the lattice, criteria and bound computations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GaborError {
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("matrix is not symmetric (asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("matrix is not positive definite (smallest eigenvalue {0:e})")]
    NotPositiveDefinite(f64),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("enumeration exceeded the cap of {cap} entries (best value so far {best:?}, upper estimate)")]
    EnumerationOverflow { cap: usize, best: Option<f64> },

    #[error("no convergence after {iterations} iterations; value bracketed in [{lower}, {upper}]")]
    NoConvergence {
        iterations: usize,
        lower: f64,
        upper: f64,
    },

    #[error("lattice is not invariant under multiplication by i")]
    NotComplexLattice,

    #[error("domain error: {0}")]
    DomainError(String),

    #[error("no frame bound available: {0}")]
    NoBoundAvailable(String),

    #[error("truncation has {points} points, above the cap of {cap}")]
    TruncationTooLarge { points: usize, cap: usize },

    #[error("invalid test function: {0}")]
    InvalidTestFunction(String),

    #[error("invalid weights: {0}")]
    InvalidWeights(String),
}

pub type Result<T> = std::result::Result<T, GaborError>;
