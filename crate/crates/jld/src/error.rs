use thiserror::Error;

#[derive(Debug, Error)]
pub enum JldError {
    #[error("grid error: {0}")]
    Grid(String),

    #[error("frame error: {0}")]
    Frame(String),

    #[error("scene parse error: {0}")]
    Parse(String),

    #[error("cell budget exceeded: {0}")]
    Budget(String),

    #[error("input error: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, JldError>;
