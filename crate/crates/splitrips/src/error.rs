//! Error type shared by every module of the crate.

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while decomposing a metric or computing homology.
///
/// Each variant maps onto one of the stable process exit codes used by the
/// command line front end (see [`Error::exit_code`]).
#[derive(Debug, Error)]
pub enum Error {
    /// The input is not shaped like a distance matrix (non-square, ragged, empty).
    #[error("structural error: {0}")]
    Structural(String),

    /// The input parsed but violates a metric axiom.
    #[error("invalid metric: {0}")]
    InvalidMetric(String),

    /// A rational or float literal could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),

    /// The metric admits no circular decomposition under the requested order(s).
    #[error("not circular decomposable: {0}")]
    NotCircular(String),

    /// A caller-side precondition of an operation does not hold.
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// An exhaustive search would exceed the configured size cap.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// Two computation routes disagree, or a method does not fit the input structure.
    #[error("method mismatch: {0}")]
    MethodMismatch(String),

    /// Removing degenerate points left nothing to work with.
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    /// An internal invariant failed; this always indicates a bug or a malformed input
    /// that slipped past validation.
    #[error("internal invariant violated: {0}")]
    Internal(String),

    /// Reading or writing a file failed.
    #[error(transparent)]
    Io(#[from] std::io::Error),

    /// JSON (de)serialization failed.
    #[error(transparent)]
    Json(#[from] serde_json::Error),

    /// CSV decoding failed.
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Process exit code associated with this error class.
    ///
    /// `2` invalid metric or unreadable input, `3` not circular decomposable,
    /// `4` method mismatch, `5` capacity, `1` anything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Structural(_)
            | Error::InvalidMetric(_)
            | Error::Parse(_)
            | Error::Io(_)
            | Error::Json(_)
            | Error::Csv(_) => 2,
            Error::NotCircular(_) => 3,
            Error::MethodMismatch(_) => 4,
            Error::Capacity(_) => 5,
            Error::Precondition(_) | Error::DegenerateInput(_) | Error::Internal(_) => 1,
        }
    }
}
