use alloc::string::String;
use core::fmt;

/// Errors produced by dataset validation, model fitting, and the
/// attribution engines.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Input violates a documented precondition or invariant.
    Invalid(String),
    /// A vector or matrix has the wrong width for the operation.
    DimMismatch { expected: usize, got: usize },
    /// A linear system could not be solved; the message names the knob
    /// that fixes it (ridge lambda, LDA shrinkage, coalition budget).
    Singular(String),
    /// Training produced a non-finite loss.
    Diverged { epoch: usize },
    /// Exact enumeration refused: 2^dim coalition evaluations would be
    /// needed. Use the kernel method instead.
    ExactCapExceeded { dim: usize, cap: usize },
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Invalid(msg) => write!(f, "invalid input: {msg}"),
            Error::DimMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Error::Singular(msg) => write!(f, "singular system: {msg}"),
            Error::Diverged { epoch } => {
                write!(f, "training diverged: non-finite loss at epoch {epoch}")
            }
            Error::ExactCapExceeded { dim, cap } => write!(
                f,
                "exact enumeration needs 2^{dim} coalitions (cap {cap}); use the kernel method"
            ),
        }
    }
}

impl core::error::Error for Error {}
