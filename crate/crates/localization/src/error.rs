use thiserror::Error;

#[derive(Debug, Error)]
pub enum LocalizationError {
    #[error("construction error: {0}")]
    Construction(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("ℓ truncation insufficient: {0}")]
    Truncation(String),

    #[error(transparent)]
    Hilbert(#[from] lab_hilbert::HilbertError),

    #[error(transparent)]
    Kpr(#[from] lab_kpr::KprError),

    #[error(transparent)]
    Charge(#[from] lab_charges::ChargeError),
}

pub type Result<T> = std::result::Result<T, LocalizationError>;
