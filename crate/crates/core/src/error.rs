use alloc::string::String;
use core::fmt;

/// Errors raised by the algebra kernels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Inversion requested for an element of positive valuation (or zero).
    NonUnit,
    /// Operands live in different coefficient rings.
    RingMismatch,
    /// Variable counts disagree, or a substitution does not cover every variable.
    ArityMismatch { expected: usize, found: usize },
    /// Valuation requested on a field.
    NotDvr,
    /// A result would need valuation at or beyond the truncation precision.
    PrecisionExhausted { precision: u32 },
    /// Declared limitation of the finite model.
    Unsupported(String),
    /// An enumeration or Gröbner step budget was exceeded.
    BudgetExceeded { budget: u64, needed: u64 },
    /// Malformed input text.
    Parse { line: usize, column: usize, message: String },
    /// Invalid construction data (non-prime p, reducible modulus, ...).
    InvalidInput(String),
    /// Presentation is not a complete intersection of the stated codimension.
    NotCompleteIntersection { expected: usize, found: usize },
    /// Point classification on a non-hypersurface germ.
    NotHypersurface,
    /// The point does not lie on the special fibre.
    PointNotOnFibre,
    /// Blow-up requested on a model that is not normalized.
    NotNormalized,
    /// Overlapping charts disagree at a shared point.
    ChartInconsistency(String),
    /// The resolution loop exceeded its guard.
    NonTermination { steps: usize },
    /// The symbolic certificate and the enumeration oracle disagree.
    OracleDisagreement(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonUnit => write!(f, "element is not a unit"),
            Error::RingMismatch => write!(f, "operands belong to different rings"),
            Error::ArityMismatch { expected, found } => {
                write!(f, "arity mismatch: expected {expected}, found {found}")
            }
            Error::NotDvr => write!(f, "valuation is only defined on DVR-kind rings"),
            Error::PrecisionExhausted { precision } => {
                write!(f, "precision exhausted (k = {precision})")
            }
            Error::Unsupported(what) => write!(f, "unsupported: {what}"),
            Error::BudgetExceeded { budget, needed } => {
                write!(f, "budget exceeded: needed {needed}, budget {budget}")
            }
            Error::Parse { line, column, message } => {
                write!(f, "parse error at {line}:{column}: {message}")
            }
            Error::InvalidInput(what) => write!(f, "invalid input: {what}"),
            Error::NotCompleteIntersection { expected, found } => write!(
                f,
                "not a complete intersection: expected codimension {expected}, found {found}"
            ),
            Error::NotHypersurface => write!(f, "germ is not a hypersurface singularity"),
            Error::PointNotOnFibre => write!(f, "point does not lie on the special fibre"),
            Error::NotNormalized => write!(f, "local model is not normalized"),
            Error::ChartInconsistency(what) => write!(f, "chart inconsistency: {what}"),
            Error::NonTermination { steps } => {
                write!(f, "resolution did not terminate within {steps} steps")
            }
            Error::OracleDisagreement(what) => write!(f, "oracle disagreement: {what}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
