use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("input is not Hermitian: {0}")]
    NotHermitian(String),
    #[error("eigensolver failed to converge after {sweeps} sweeps (off-diagonal {off:.3e})")]
    NoConvergence { sweeps: usize, off: f64 },
    #[error("invalid problem: {0}")]
    InvalidProblem(String),
    #[error("matrix is not diagonal")]
    NotDiagonal,
    #[error("element is not in the span (residual {residual:.3e})")]
    NotInSpan { residual: f64 },
    #[error("unit is not in the span of the basis")]
    UnitNotInSpan,
    #[error("basis is linearly dependent (gram min eigenvalue {0:.3e})")]
    DependentBasis(f64),
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
