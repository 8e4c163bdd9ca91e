use thiserror::Error;

/// Errors raised by the library. Every variant carries a human-readable
/// description of the offending value.
#[derive(Debug, Error)]
pub enum Error {
    /// A dimension or qubit count is outside its admissible range.
    #[error("dimension error: {0}")]
    Dimension(String),

    /// Two objects that must agree in shape do not.
    #[error("shape error: {0}")]
    Shape(String),

    /// A computation would exceed one of the configured size caps.
    #[error("resource error: {0}")]
    Resource(String),

    /// A structurally invalid specification (bad level, missing leaf, ...).
    #[error("specification error: {0}")]
    Specification(String),

    /// An input failed a numeric precondition (unitarity, norm bound, distinctness).
    #[error("validation error: {0}")]
    Validation(String),

    /// A scalar parameter is out of range.
    #[error("parameter error: {0}")]
    Parameter(String),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
