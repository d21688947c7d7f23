//! Error type shared across the crate.

use std::fmt;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced by geometry, map, loss, evaluation, and IO operations.
#[derive(Debug)]
pub enum Error {
    /// Box construction rejected: non-positive extent or non-finite coordinate.
    InvalidBox(String),
    /// Mismatched or non-conforming grid/array dimensions.
    Dimension(String),
    /// Input outside the operation's domain (e.g. an ROI fully outside the map).
    Domain(String),
    /// Invalid configuration value or unknown configuration key.
    Config(String),
    /// Malformed text input; carries the 1-based line number.
    Parse { line: usize, message: String },
    /// Corrupt, truncated, or wrong-version binary map data.
    Format(String),
    /// No trainable entries (e.g. every anchor is drop-out).
    DegenerateInput(String),
    Io(std::io::Error),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidBox(msg) => write!(f, "invalid box: {msg}"),
            Error::Dimension(msg) => write!(f, "dimension error: {msg}"),
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Config(msg) => write!(f, "config error: {msg}"),
            Error::Parse { line, message } => write!(f, "parse error at line {line}: {message}"),
            Error::Format(msg) => write!(f, "format error: {msg}"),
            Error::DegenerateInput(msg) => write!(f, "degenerate input: {msg}"),
            Error::Io(err) => write!(f, "io error: {err}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io(err) => Some(err),
            _ => None,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err)
    }
}
