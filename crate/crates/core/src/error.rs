//! Error type shared by the geometry, integration and solver layers.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A point fell outside its chart box, or an input failed a documented
    /// precondition (resolution too small, nonpositive conformal factor, ...).
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The metric failed to be positive definite / invertible where sampled.
    #[error("metric degenerate at chart point {point:?}: {detail}")]
    Degenerate { point: [f64; 4], detail: String },

    /// Expression or document parse failure with a 1-based source position.
    #[error("parse error at line {line}, column {col}: {message}")]
    Parse { line: usize, col: usize, message: String },

    /// An internal cross-check failed (non-symmetric projection, frame not
    /// orthonormal, ...). Indicates a bug or badly conditioned input rather
    /// than a user mistake.
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}
