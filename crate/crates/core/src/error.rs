use thiserror::Error;

/// Errors raised by state construction, measures and the verification harness.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("vector norm is zero (below 1e-12)")]
    ZeroVector,

    #[error("index {index} out of range for {num_sites} sites")]
    IndexOutOfRange { index: usize, num_sites: usize },

    #[error("invalid subsystem set: {0}")]
    InvalidSubsystem(String),

    #[error("subsystem set is not a proper subset of {num_sites} sites")]
    NotProperSubset { num_sites: usize },

    #[error("matrix is not Hermitian (residual {0:e})")]
    NotHermitian(f64),

    #[error("matrix is not unitary (residual {0:e})")]
    NotUnitary(f64),

    #[error("state is not normalized (norm^2 = {0})")]
    NotNormalized(f64),

    #[error("trace is not 1 (got {0})")]
    InvalidTrace(f64),

    #[error("matrix is not positive semidefinite (min eigenvalue {0:e})")]
    NotPositive(f64),

    #[error("out of range: {0}")]
    OutOfRange(String),

    #[error("outside the domain of the closed form: {0}")]
    OutOfDomain(String),

    #[error("incompatible input for {relation}: {reason}")]
    IncompatibleInput { relation: String, reason: String },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
