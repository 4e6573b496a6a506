use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("operator is not Hermitian (residual {residual:.3e})")]
    NotHermitian { residual: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("eigensolver failed to converge on {label}")]
    EigenFailure { label: String },

    #[error("eigenvector for eigenvalue {eigenvalue} has vanishing norm")]
    DegenerateEigenvector { eigenvalue: Complex64 },

    #[error("certification failed: {0}")]
    Certification(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn ensure_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
