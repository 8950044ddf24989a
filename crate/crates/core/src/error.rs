//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by graph construction, transforms, model fitting and
/// prediction.
#[derive(Debug, Error)]
pub enum Error {
    /// A caller-supplied argument is out of range or malformed.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Operands have incompatible shapes.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// Not enough observations for the requested operation.
    #[error("insufficient data: {0}")]
    InsufficientData(String),

    /// An iterative routine failed to converge.
    #[error("failed to converge: {0}")]
    Convergence(String),

    /// A linear system could not be solved.
    #[error("singular system: {0}")]
    Singular(String),

    /// A NaN or infinity appeared where a finite value is required.
    #[error("non-finite value: {0}")]
    NonFinite(String),

    /// An error raised while processing one graph frequency or node.
    #[error("component {index}: {source}")]
    AtFrequency {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    /// A serialized model does not match the supplied eigenbasis.
    #[error("eigenbasis checksum mismatch: {0}")]
    ChecksumMismatch(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    /// Malformed content in an otherwise readable file.
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Wrap an error with the graph-frequency index it occurred at.
    pub fn at_frequency(index: usize, source: Error) -> Self {
        Error::AtFrequency {
            index,
            source: Box::new(source),
        }
    }

    /// True for failures of numerical routines (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::Convergence(_)
            | Error::Singular(_)
            | Error::NonFinite(_)
            | Error::ChecksumMismatch(_) => true,
            Error::AtFrequency { source, .. } => source.is_numerical(),
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
