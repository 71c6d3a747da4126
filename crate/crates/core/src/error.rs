//! Error type shared by all modules of the crate.

use alloc::string::String;
use core::fmt;

/// Convenience alias used throughout the crate.
pub type Result<T> = core::result::Result<T, Error>;

/// Errors produced by map construction and evaluation.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    Domain {
        /// Operation that rejected the argument.
        what: &'static str,
        /// The offending value.
        value: f64,
    },
    /// A cube coordinate was exactly 0 or 1 under the rejecting boundary
    /// policy.
    Boundary {
        /// Index of the offending coordinate.
        index: usize,
        /// The offending value.
        value: f64,
    },
    /// The root-finding target lies outside `[g(lo), g(hi)]`.
    Bracket {
        /// Target value that could not be bracketed.
        target: f64,
        /// `g` evaluated at the lower end.
        g_lo: f64,
        /// `g` evaluated at the upper end.
        g_hi: f64,
    },
    /// An iterative scheme exhausted its budget before reaching tolerance.
    Convergence {
        /// Scheme that failed to converge.
        what: &'static str,
        /// Best error estimate at the point of failure.
        residual: f64,
    },
    /// The requested point lies on (or too close to) the cut locus, where
    /// the exponential chart is not invertible.
    CutLocus {
        /// Distance from the point to the cut locus.
        distance: f64,
    },
    /// Coordinate counts do not match the expected dimension.
    DimensionMismatch {
        /// Dimension required by the operation.
        expected: usize,
        /// Dimension actually supplied.
        got: usize,
    },
    /// A constructor received an invalid parameter.
    InvalidParameter(String),
    /// A custom weight does not integrate to a probability measure.
    Normalization {
        /// Total mass of the supplied weight.
        mass: f64,
    },
    /// The operation is not defined for the given arguments.
    Unsupported(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain { what, value } => {
                write!(f, "{what}: argument {value} outside domain")
            }
            Error::Boundary { index, value } => {
                write!(f, "cube coordinate {index} = {value} lies on the boundary")
            }
            Error::Bracket { target, g_lo, g_hi } => {
                write!(f, "target {target} outside bracket [{g_lo}, {g_hi}]")
            }
            Error::Convergence { what, residual } => {
                write!(f, "{what} failed to converge (residual {residual:e})")
            }
            Error::CutLocus { distance } => {
                write!(f, "point within {distance:e} of the cut locus")
            }
            Error::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::Normalization { mass } => {
                write!(f, "weight has total mass {mass}, expected 1")
            }
            Error::Unsupported(msg) => write!(f, "unsupported: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
