//! Error type shared by all core modules.

use alloc::string::String;
use core::fmt;

/// Errors produced by core operations.
#[derive(Debug, Clone, PartialEq)]
pub enum CoreError {
    /// Vector or matrix dimensions do not match.
    DimensionMismatch { expected: usize, got: usize },
    /// An argument is outside its documented domain.
    InvalidInput(String),
    /// A state or subset enumeration would exceed the configured cap.
    CapacityExceeded { size: usize, cap: usize },
    /// An iterative or direct numeric procedure failed (non-convergence,
    /// singular system).
    Numeric(String),
    /// A feature or output-gradient vector has zero norm, so a projection
    /// step cannot be formed. Callers skip the step and count the event.
    DegenerateFeature,
    /// Too few vectors for the requested trimming level.
    TooFewVectors { needed: usize, got: usize },
}

impl fmt::Display for CoreError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoreError::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            CoreError::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            CoreError::CapacityExceeded { size, cap } => {
                write!(f, "capacity exceeded: size {size} over cap {cap}")
            }
            CoreError::Numeric(msg) => write!(f, "numeric failure: {msg}"),
            CoreError::DegenerateFeature => write!(f, "degenerate feature vector (zero norm)"),
            CoreError::TooFewVectors { needed, got } => {
                write!(f, "too few vectors: need more than {needed}, got {got}")
            }
        }
    }
}

impl core::error::Error for CoreError {}

pub type Result<T> = core::result::Result<T, CoreError>;
