use thiserror::Error;

/// Errors raised by construction and verification routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ambient mismatch: polynomial over {left} x-variables combined with one over {right}")]
    AmbientMismatch { left: usize, right: usize },

    #[error("variable {0} is not part of the ambient ring")]
    UnknownVariable(String),

    #[error("invalid divisor: {0}")]
    InvalidDivisor(String),

    #[error("invalid summation bound: the bound contains the summation variable {0}")]
    InvalidBound(String),

    #[error("invalid dimension: l = {0}, at least 2 is required")]
    InvalidDimension(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("index {index} out of range {lo}..={hi}")]
    IndexOutOfRange { index: usize, lo: usize, hi: usize },

    #[error("shape error: {0}")]
    Shape(String),

    #[error("field {index} does not have homogeneous coefficients of a single degree")]
    NonHomogeneous { index: usize },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
