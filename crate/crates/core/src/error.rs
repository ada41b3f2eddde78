use core::fmt;

/// Errors raised by the core algorithms.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A parameter is outside its admissible range.
    Parameter(&'static str),
    /// Arm index `arm` is not below the number of arms `k`.
    ArmOutOfRange { arm: usize, k: usize },
    /// An input broke a precondition that the calibration of a mechanism relies on.
    Contract(&'static str),
    /// A streaming mechanism received more updates than it was sized for.
    Capacity { capacity: u64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Parameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::ArmOutOfRange { arm, k } => {
                write!(f, "arm index {arm} out of range for {k} arms")
            }
            Error::Contract(msg) => write!(f, "contract violation: {msg}"),
            Error::Capacity { capacity } => {
                write!(f, "mechanism capacity of {capacity} updates exceeded")
            }
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T, E = Error> = core::result::Result<T, E>;
