//! Error type shared by all engine operations.

use core::fmt;

/// Result alias used throughout the crate.
pub type Result<T> = core::result::Result<T, Error>;

/// Errors produced by state construction, transforms, and protocol runs.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A state must carry at least one mode.
    NoModes,
    /// Mode index is not smaller than the number of modes.
    ModeOutOfRange { mode: usize, num_modes: usize },
    /// An operation on two modes received the same index twice.
    DuplicateMode { mode: usize },
    /// A vector or matrix has the wrong size for the target state.
    DimensionMismatch { expected: usize, actual: usize },
    /// A numeric parameter is outside its admissible range.
    InvalidParameter { name: &'static str, value: f64 },
    /// A matrix expected to be symmetric is not, within tolerance.
    NotSymmetric { max_deviation: f64 },
    /// A matrix expected to preserve the symplectic form does not.
    NotSymplectic { max_deviation: f64 },
    /// A covariance matrix has a non-positive ordinary eigenvalue, so it
    /// admits no symplectic spectrum.
    NotPositiveDefinite { min_eigenvalue: f64 },
    /// A covariance matrix violates the uncertainty bound: its smallest
    /// symplectic eigenvalue lies below 1/4.
    Unphysical { nu_min: f64 },
    /// Homodyne conditioning saw a negative variance on the measured
    /// quadrature.
    NegativeMeasuredVariance { variance: f64 },
    /// Phase-space sampling failed because the covariance could not be
    /// factored.
    SingularCovariance,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NoModes => write!(f, "state must have at least one mode"),
            Error::ModeOutOfRange { mode, num_modes } => {
                write!(f, "mode index {mode} out of range for {num_modes} modes")
            }
            Error::DuplicateMode { mode } => {
                write!(f, "operation requires two distinct modes, got {mode} twice")
            }
            Error::DimensionMismatch { expected, actual } => {
                write!(f, "dimension mismatch: expected {expected}, got {actual}")
            }
            Error::InvalidParameter { name, value } => {
                write!(f, "parameter `{name}` out of range: {value}")
            }
            Error::NotSymmetric { max_deviation } => {
                write!(f, "matrix not symmetric (max deviation {max_deviation:e})")
            }
            Error::NotSymplectic { max_deviation } => {
                write!(f, "matrix not symplectic (max deviation {max_deviation:e})")
            }
            Error::NotPositiveDefinite { min_eigenvalue } => {
                write!(f, "covariance not positive definite (min eigenvalue {min_eigenvalue:e})")
            }
            Error::Unphysical { nu_min } => {
                write!(f, "unphysical covariance: smallest symplectic eigenvalue {nu_min} < 1/4")
            }
            Error::NegativeMeasuredVariance { variance } => {
                write!(f, "measured quadrature has negative variance {variance:e}")
            }
            Error::SingularCovariance => {
                write!(f, "covariance factorization failed during sampling")
            }
        }
    }
}

impl core::error::Error for Error {}
