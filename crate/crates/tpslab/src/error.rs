//! Error type shared by every module of the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: ||A - A'||_F = {residual:.3e} exceeds {tol:.3e}")]
    NotHermitian { residual: f64, tol: f64 },

    #[error("eigensolver failed to converge after {sweeps} sweeps (dim {dim})")]
    NoConvergence { dim: usize, sweeps: usize },

    #[error("constructed dimension {requested} exceeds the cap {cap}")]
    DimensionOverflow { requested: usize, cap: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("keep set for partial trace is empty")]
    EmptyKeepSet,

    #[error("invalid factor dimension {dim}: every factor must have dimension >= 2")]
    InvalidFactorDim { dim: usize },

    #[error("matrix is not unitary: ||U'U - I||_F = {residual:.3e} exceeds {tol:.3e}")]
    NotUnitary { residual: f64, tol: f64 },

    #[error("angle vector has length {got}, expected {expected}")]
    AngleLengthMismatch { expected: usize, got: usize },

    #[error("cannot normalize the zero vector")]
    ZeroVector,

    #[error("state is not in product form: residual {residual:.3e} exceeds tolerance {tol:.3e}")]
    NotProductState { residual: f64, tol: f64 },

    #[error("spectral clustering is tolerance-sensitive: gap {gap:.3e} lies within 10x of tolerance {tol:.3e}")]
    AmbiguousClustering { gap: f64, tol: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Exit-code class used by the command-line surface: 2 for input
    /// validation failures, 3 for numerical-quality failures, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NotHermitian { .. }
            | Error::DimensionOverflow { .. }
            | Error::DimensionMismatch(_)
            | Error::EmptyKeepSet
            | Error::InvalidFactorDim { .. }
            | Error::NotUnitary { .. }
            | Error::AngleLengthMismatch { .. }
            | Error::ZeroVector
            | Error::NotProductState { .. }
            | Error::InvalidInput(_)
            | Error::Json(_) => 2,
            Error::NoConvergence { .. } | Error::AmbiguousClustering { .. } => 3,
            Error::Io(_) => 1,
        }
    }
}
