use thiserror::Error;

/// Errors raised by grid and wave-function operations.
#[derive(Debug, Error)]
pub enum HilbertError {
    /// Two vectors do not share the same radial grid / mode set.
    #[error("incompatible basis: {0}")]
    IncompatibleBasis(String),

    /// A parameter is outside its admissible domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A grid could not be constructed from the given parameters.
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
}

pub type Result<T> = std::result::Result<T, HilbertError>;
