use thiserror::Error;

/// Errors raised by the exact and numeric layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("inexact division: {0}")]
    InexactDivision(String),
    #[error("missing binding for parameter `{0}`")]
    MissingBinding(String),
    #[error("pole: inverted parameter `{0}` bound to zero")]
    Pole(String),
    #[error("pairing undefined: {0}")]
    PairingUndefined(String),
    #[error("recursion violated at (n={n}, m={m}): {detail}")]
    RecursionViolated { n: i64, m: i64, detail: String },
    #[error("triangularity failure: {0}")]
    Triangularity(String),
    #[error("degenerate system: {0}")]
    Degenerate(String),
    #[error("insufficient order: {0}")]
    InsufficientOrder(String),
    #[error("numeric error: {0}")]
    Numeric(String),
    #[error("json error: {0}")]
    Json(String),
}

impl Error {
    /// `true` for errors caused by malformed input rather than a domain failure.
    pub fn is_usage(&self) -> bool {
        matches!(self, Error::Usage(_) | Error::Parse(_) | Error::Json(_))
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
