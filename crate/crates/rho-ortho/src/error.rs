use thiserror::Error;

/// Errors surfaced by the numerical routines and witness constructions.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not hermitian within tolerance")]
    NotHermitian,
    #[error("{0}: iteration limit exceeded")]
    NoConvergence(&'static str),
    #[error("operation requires a nonzero operator")]
    ZeroOperator,
    #[error("operation requires a nonzero vector")]
    ZeroVector,
    #[error("norm derivative base point is zero")]
    ZeroBasePoint,
    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),
    #[error("witness construction failed: {0}")]
    ConstructionFailed(String),
    #[error("orthogonal-partner shift did not converge")]
    ShiftFailed,
    #[error("bad weight sequence: {0}")]
    BadSequence(String),
    #[error("shape mismatch: {0}x{1} vs {2}x{3}")]
    ShapeMismatch(usize, usize, usize, usize),
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),
}

pub type Result<T> = std::result::Result<T, Error>;
