use thiserror::Error;

/// Errors produced by the dimer library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("integer label 2^{alpha}*3^{beta} does not fit in 128 bits")]
    Overflow { alpha: usize, beta: usize },

    #[error("eigen index m = {m} is out of range for k = {k}")]
    IndexOutOfRange { k: usize, m: usize },

    #[error("operator is undefined on the zero-particle block")]
    EmptyBlock,

    #[error("coherent state needs more than k_max = {k_max} blocks (retained mass {retained})")]
    TruncationFailure { k_max: usize, retained: f64 },

    #[error("vector has zero norm")]
    ZeroVector,

    #[error("Jacobi iteration did not converge after {sweeps} sweeps (worst residual {worst_residual:e})")]
    NoConvergence { sweeps: usize, worst_residual: f64 },

    #[error("matrix is not symmetric")]
    NotSymmetric,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dense materialization of the k = {k} block exceeds the cap of {cap}")]
    DenseCapExceeded { k: usize, cap: usize },

    #[error("amplitude is not finite")]
    NonFinite,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
