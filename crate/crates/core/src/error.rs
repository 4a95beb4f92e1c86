use thiserror::Error;

/// Errors raised by the numerical routines, the harness and report I/O.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("matrix is not Hermitian (defect {defect:.3e}, tolerance {tol:.3e})")]
    NotHermitian { defect: f64, tol: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eig:.3e})")]
    NotPsd { min_eig: f64 },

    #[error("matrix is not positive definite enough for congruence inversion (min eigenvalue {min_eig:.3e} < floor {floor:.3e})")]
    NotPositiveDefinite { min_eig: f64, floor: f64 },

    #[error("angle undefined: {0}")]
    AngleUndefined(String),

    #[error("profile empty: all {0} samples were degenerate")]
    ProfileEmpty(usize),

    #[error("malformed matrix JSON: {0}")]
    Json(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
