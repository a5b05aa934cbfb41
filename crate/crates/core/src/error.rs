use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid network: {0}")]
    InvalidNetwork(String),
    #[error("invalid noise profile: {0}")]
    InvalidNoise(String),
    #[error("numeric error: {0}")]
    Numeric(String),
    #[error("integration did not converge: {0}")]
    Integration(String),
    #[error("invalid series: {0}")]
    InvalidSeries(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("checkpoint mismatch: {0}")]
    Checkpoint(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
