use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{op}: incompatible shapes {left:?} and {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("{op}: exact and float operands cannot be mixed")]
    ModeMismatch { op: &'static str },

    #[error("expected a square matrix, got {rows}x{cols}")]
    NonSquare { rows: usize, cols: usize },

    #[error("matrix is singular")]
    SingularMatrix,

    /// `A^k = 0`; the generalized inverses of a nilpotent matrix are all zero.
    #[error("matrix is nilpotent, no full-rank chain exists")]
    NilpotentInput,

    #[error("matrix has index {index}, at most {max} is required")]
    IndexTooLarge { index: usize, max: usize },

    #[error("unsupported combination: {0}")]
    UnsupportedCombination(String),

    #[error("invalid full-rank chain: {0}")]
    InvalidChain(String),

    #[error("power m = {m} must satisfy m >= max(index, 1) = {min}")]
    InvalidPower { m: usize, min: usize },

    #[error("this limit formula needs a full-rank chain")]
    ChainRequired,

    #[error("shifted matrix is singular at lambda = {lambda:e}")]
    ShiftSingular { lambda: f64 },

    #[error("no convergence after {steps} steps (last extrapolated delta {last_delta:e})")]
    NoConvergence { steps: usize, last_delta: f64 },

    #[error("limit does not exist: entry ({row}, {col}) diverges as lambda -> 0")]
    LimitUndefined { row: usize, col: usize },

    #[error("invalid lambda schedule: {0}")]
    InvalidSchedule(String),

    #[error("non-finite float entry cannot be converted to an exact value")]
    NonFinite,

    #[error("exact polynomial division left a remainder")]
    InexactDivision,
}

impl Error {
    /// Stable machine-readable identifier, used in CLI reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::ModeMismatch { .. } => "ModeMismatch",
            Error::NonSquare { .. } => "NonSquare",
            Error::SingularMatrix => "SingularMatrix",
            Error::NilpotentInput => "NilpotentInput",
            Error::IndexTooLarge { .. } => "IndexTooLarge",
            Error::UnsupportedCombination(_) => "UnsupportedCombination",
            Error::InvalidChain(_) => "InvalidChain",
            Error::InvalidPower { .. } => "InvalidPower",
            Error::ChainRequired => "ChainRequired",
            Error::ShiftSingular { .. } => "ShiftSingular",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::LimitUndefined { .. } => "LimitUndefined",
            Error::InvalidSchedule(_) => "InvalidSchedule",
            Error::NonFinite => "NonFinite",
            Error::InexactDivision => "InexactDivision",
        }
    }
}
