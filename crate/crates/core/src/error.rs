use std::fmt;

use num_complex::Complex64;

/// Errors raised by construction and evaluation routines.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A material parameter violates one of the admissibility inequalities.
    /// The message names the violated inequality.
    InvalidMaterial(String),
    /// A caller-supplied argument is out of range (bad grid, tolerance, ...).
    InvalidArgument(String),
    /// Evaluation was requested inside the exclusion radius of a singular
    /// speed (c = 0 or c = ±c2, where the mode vectors degenerate).
    SingularSpeed { c: Complex64, exclusion: f64 },
    /// The boundary-parameter regime does not match what the operation
    /// requires.
    RegimeMismatch {
        required: &'static str,
        found: &'static str,
    },
    /// |f| dropped below the contour-safety threshold somewhere on a
    /// winding-number contour; the caller must shrink or move the rectangle.
    ContourNearZero {
        at: Complex64,
        min_abs: f64,
        threshold: f64,
    },
    /// Adaptive edge refinement could not bring the phase steps below pi/2;
    /// a zero sits on (or numerically on) the contour.
    PhaseUnresolved { at: Complex64 },
    /// A certified numerical bound failed to hold.
    BoundViolated(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidMaterial(msg) => write!(f, "invalid material: {msg}"),
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::SingularSpeed { c, exclusion } => write!(
                f,
                "speed {c} lies within the exclusion radius {exclusion:e} of a singular speed"
            ),
            Error::RegimeMismatch { required, found } => write!(
                f,
                "boundary regime mismatch: operation requires {required}, got {found}"
            ),
            Error::ContourNearZero {
                at,
                min_abs,
                threshold,
            } => write!(
                f,
                "contour too close to a zero: |f({at})| = {min_abs:e} < threshold {threshold:e}"
            ),
            Error::PhaseUnresolved { at } => write!(
                f,
                "phase step could not be refined below pi/2 near {at}; zero on contour?"
            ),
            Error::BoundViolated(msg) => write!(f, "bound violated: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
