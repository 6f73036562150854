use thiserror::Error;

/// Errors produced across the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid sample: {0}")]
    InvalidSample(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    /// `F(L, ·)` has no sign change below the supplied bracket; the
    /// two-sided truncation curve has ended.
    #[error("no balancing right endpoint below {hint} for left endpoint {left}")]
    NoBalance { left: f64, hint: f64 },

    #[error("numerical procedure did not converge: {0}")]
    NonConvergence(String),

    #[error("failed to parse mixture: {0}")]
    MixtureParse(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
