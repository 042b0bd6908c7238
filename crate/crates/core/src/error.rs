use thiserror::Error;

/// Failures surfaced by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Structurally invalid argument (overlapping tags, bad partition, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// Mismatched arities, dimensions or flags.
    #[error("usage error: {0}")]
    Usage(String),
    /// A stated precondition of an operation does not hold.
    #[error("precondition violated: {what}; residual has {residual_terms} terms")]
    Precondition { what: String, residual_terms: usize },
    /// A degree-wise solver could not continue.
    #[error("solver failure at degree {degree}: {detail}")]
    Solver { degree: usize, detail: String },
    /// Malformed artifact text.
    #[error("parse error at line {line}, column {column}: {msg}")]
    Parse { line: usize, column: usize, msg: String },
    /// Well-formed text whose content is invalid at a JSON path.
    #[error("invalid artifact content at {path}: {msg}")]
    Decode { path: String, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub(crate) fn parse(msg: impl Into<String>) -> Self {
        Error::Parse { line: 0, column: 0, msg: msg.into() }
    }
}
