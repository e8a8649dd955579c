use thiserror::Error;

#[derive(Debug, Error)]
pub enum ChargeError {
    #[error("incompatible basis: {0}")]
    IncompatibleBasis(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("extrapolation uncertainty {uncertainty:.3e} exceeds tolerance {tolerance:.3e}: {context}")]
    ExtrapolationUncertain {
        uncertainty: f64,
        tolerance: f64,
        context: String,
    },

    #[error(transparent)]
    Hilbert(#[from] lab_hilbert::HilbertError),

    #[error(transparent)]
    Kpr(#[from] lab_kpr::KprError),
}

pub type Result<T> = std::result::Result<T, ChargeError>;
