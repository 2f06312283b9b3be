use thiserror::Error;

/// Errors raised by every fallible operation in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Invalid argument: field mismatch, bad index, inconsistent dimensions.
    #[error("parameter error: {0}")]
    Parameter(String),
    #[error("division by zero")]
    ZeroDivisor,
    /// Input outside the domain of a partial operation.
    #[error("domain error: {0}")]
    Domain(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    /// A postcondition that should hold by construction did not.
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    /// Configuration problems, one entry per offending field path.
    #[error("invalid configuration: {}", .0.join("; "))]
    Config(Vec<String>),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn param<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parameter(msg.into()))
}
