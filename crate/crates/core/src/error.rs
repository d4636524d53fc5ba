//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Shape or length of an input does not match what the operation requires.
    #[error("dimension error: {0}")]
    Dimension(String),

    /// A dimension plan cannot be realized (names the violated inequality).
    #[error("infeasible plan: {0}")]
    Plan(String),

    /// A brute-force instance exceeds its enumeration guard.
    #[error("instance too large: {0}")]
    Guard(String),

    /// An operation received an input with no usable content.
    #[error("empty input: {0}")]
    EmptyInput(String),

    /// A file does not conform to one of the documented binary/CSV formats.
    #[error("format error: {0}")]
    Format(String),

    /// Calibration could not produce a recommendation.
    #[error("calibration failed: {0}")]
    Calibration(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
