use thiserror::Error;

/// Errors raised anywhere in the pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// `solve` found no solution. Kept separate from every other failure so
    /// callers can branch on it.
    #[error("linear system is inconsistent")]
    Inconsistent,

    #[error("invalid root system: {0}")]
    InvalidType(String),

    #[error("Weyl group of {label} has {order} elements, above the supported limit of {limit}")]
    TooLarge { label: String, order: u64, limit: u64 },

    #[error("malformed element `{0}`")]
    MalformedElement(String),

    #[error("malformed rational `{0}`")]
    MalformedRational(String),

    #[error("malformed path reference: {0}")]
    MalformedPath(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("invalid IC-module: {0}")]
    InvalidModule(String),

    /// A self-check that can only fail if the implementation is wrong.
    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
