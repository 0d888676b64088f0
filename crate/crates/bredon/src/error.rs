use thiserror::Error;

/// Engine-wide error type. The CLI maps the variants onto its exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("invalid complex: {0}")]
    InvalidComplex(String),
    #[error("invalid coefficient system: {0}")]
    InvalidSystem(String),
    #[error("internal invariant failure: {0}")]
    Internal(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
