use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Two operands live on quantum tori with different deformation parameters.
    #[error("deformation parameter mismatch: {left} vs {right}")]
    ParameterMismatch { left: f64, right: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}x{expected}, got {rows}x{cols}")]
    DimensionMismatch {
        expected: usize,
        rows: usize,
        cols: usize,
    },

    /// A matrix that should be unitary is not, within tolerance.
    #[error("matrix is not unitary: deviation {deviation:e} exceeds {tolerance:e}")]
    NotUnitary { deviation: f64, tolerance: f64 },

    #[error("matrix determinant {det} is not ±1")]
    InvalidMatrix { det: i64 },

    /// A quantity that must be real came out with a non-negligible imaginary part.
    #[error("numerical consistency failure: {0}")]
    Consistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
