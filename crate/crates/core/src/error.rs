use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("matrix is not Hermitian (max |a_ij - conj(a_ji)| = {asymmetry:e})")]
    NotHermitian { asymmetry: f64 },

    #[error("matrix is singular within tolerance (min eigenvalue {min_eigenvalue:e}, norm {norm:e})")]
    Singular { min_eigenvalue: f64, norm: f64 },

    #[error("index {index} lies outside the basis window {window}")]
    OutOfWindow { index: i64, window: String },

    #[error("invalid probability measure: {0}")]
    InvalidMeasure(String),

    #[error("cells do not partition the circle: {0}")]
    InvalidPartition(String),

    #[error("bound not applicable: {0}")]
    BoundInapplicable(String),

    #[error("numerical consistency violated: {0}")]
    NumericalConsistency(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors caused by malformed or out-of-contract input, as
    /// opposed to numerical failures.
    pub fn is_validation(&self) -> bool {
        !matches!(self, Error::Singular { .. } | Error::NumericalConsistency(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
