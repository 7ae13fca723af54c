use alloc::string::String;
use core::fmt;

/// Error type shared across the crate.
///
/// Everything here is a caller error or a structural defect of the input;
/// internal invariant violations panic instead.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CccError {
    /// A fan failed a structural validity check (face closure, ray list,
    /// primitivity, cone overlap).
    MalformedFan(String),
    /// An operation was asked to run in a rank it does not support.
    UnsupportedRank { got: usize, max: usize },
    /// A bad argument that is not a rank issue (unknown ray, point outside
    /// the expected locus, zero covector, ...).
    Argument(String),
    /// A lattice-point enumeration or Euler total needs a finite window
    /// and none was given.
    WindowRequired(String),
    /// A colimit did not stabilize within the allowed number of steps.
    NoStabilization { l_max: u32 },
}

impl fmt::Display for CccError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CccError::MalformedFan(msg) => write!(f, "malformed fan: {msg}"),
            CccError::UnsupportedRank { got, max } => {
                write!(f, "unsupported rank {got} (supported up to {max})")
            }
            CccError::Argument(msg) => write!(f, "invalid argument: {msg}"),
            CccError::WindowRequired(msg) => write!(f, "finite window required: {msg}"),
            CccError::NoStabilization { l_max } => {
                write!(f, "no stabilization by l_max = {l_max}")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for CccError {}
