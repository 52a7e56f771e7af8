//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by parsing, configuration checks, and resource guards.
#[derive(Debug, Error)]
pub enum Error {
    /// A data line that does not match the documented grammar. Line numbers
    /// are 1-based positions in the input stream.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// The input produced a graph with no usable edges.
    #[error("empty graph: {0}")]
    EmptyGraph(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    /// A dense export or augmentation would exceed a configured budget.
    #[error("resource budget exceeded: {0}")]
    Budget(String),

    /// A weight scheme does not belong to the graph it was paired with.
    #[error("weight scheme mismatch: {0}")]
    SchemeMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
