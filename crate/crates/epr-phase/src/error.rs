use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    InvalidArgument(String),
    /// Operands live on Fock spaces with different cutoffs.
    SpaceMismatch { left: usize, right: usize },
    /// Grid operands have different shapes.
    GridMismatch,
    /// The input carries no usable information (zero norm and the like).
    DegenerateInput(String),
    /// A trace-route map was used before its normalization was calibrated.
    NotCalibrated,
    /// Calibration traces disagree by more than the allowed spread.
    Calibration { spread: f64 },
    /// A numerical procedure did not reach its internal accuracy target.
    Accuracy(String),
    /// A least-squares symbol fit left a residual above the acceptance bound.
    OracleFit { residual: f64 },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidArgument(m) => write!(f, "invalid argument: {m}"),
            Error::SpaceMismatch { left, right } => {
                write!(f, "space mismatch: cutoff {left} vs cutoff {right}")
            }
            Error::GridMismatch => f.write_str("grid shapes differ"),
            Error::DegenerateInput(m) => write!(f, "degenerate input: {m}"),
            Error::NotCalibrated => f.write_str("trace normalization has not been calibrated"),
            Error::Calibration { spread } => {
                write!(f, "calibration traces spread by {spread:.3e} (limit 5e-2)")
            }
            Error::Accuracy(m) => write!(f, "accuracy target missed: {m}"),
            Error::OracleFit { residual } => {
                write!(f, "symbol fit residual {residual:.3e} exceeds 1e-2")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}
