//! Error types shared across the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Numeric argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Two feature vectors of different lengths were combined.
    #[error("dimension mismatch: left has {left} features, right has {right}")]
    DimensionMismatch { left: usize, right: usize },

    /// A cell of the input file failed to parse.
    #[error("parse error at row {row}, column `{column}`: {message}")]
    Parse {
        row: usize,
        column: String,
        message: String,
    },

    /// Underlying file or stream failure.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// Dataset-level invariant violation (class counts, label range, non-finite values).
    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    /// Configuration value outside its allowed range.
    #[error("invalid config: {0}")]
    InvalidConfig(String),

    /// An operation precondition was violated by the caller.
    #[error("contract violation: {0}")]
    Contract(String),

    /// Unknown stage name in a pipeline description.
    #[error("unknown pipeline stage `{0}` (expected one of: enn, tkl, smote, ingb)")]
    UnknownStage(String),
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        match e.kind() {
            csv::ErrorKind::Io(_) => match e.into_kind() {
                csv::ErrorKind::Io(io) => Error::Io(io),
                _ => unreachable!(),
            },
            _ => Error::Parse {
                row: e
                    .position()
                    .map(|p| p.line() as usize)
                    .unwrap_or_default(),
                column: String::new(),
                message: e.to_string(),
            },
        }
    }
}
