//! Error type shared by all gridframe modules.

use std::fmt;

/// Errors produced by configuration validation, transforms, and the
/// adaptive estimator.
#[derive(Debug)]
pub enum Error {
    /// Invalid signal or scenario configuration (bad amplitudes, rates,
    /// sag depths, ...).
    Config(String),
    /// An operation was called with arguments that violate its contract
    /// (length mismatch, out-of-range reduction order, ...).
    Validation(String),
    /// The adaptive filter produced a non-finite weight.
    Divergence { sample_index: usize },
    /// A CSV or JSON input could not be parsed. `line` is 1-based and
    /// includes the header line for CSV inputs.
    Parse { line: usize, message: String },
    /// Underlying I/O failure.
    Io(std::io::Error),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Config(msg) => write!(f, "invalid configuration: {msg}"),
            Error::Validation(msg) => write!(f, "invalid argument: {msg}"),
            Error::Divergence { sample_index } => {
                write!(f, "estimator diverged at sample {sample_index}")
            }
            Error::Parse { line, message } => write!(f, "parse error at line {line}: {message}"),
            Error::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io(e) => Some(e),
            _ => None,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e)
    }
}

pub type Result<T> = std::result::Result<T, Error>;
