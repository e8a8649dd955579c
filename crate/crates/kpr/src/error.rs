use thiserror::Error;

#[derive(Debug, Error)]
pub enum KprError {
    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error(transparent)]
    Hilbert(#[from] lab_hilbert::HilbertError),
}

pub type Result<T> = std::result::Result<T, KprError>;
