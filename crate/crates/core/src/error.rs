use thiserror::Error;

/// Errors raised by operator construction, braid handling and group closure.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("qudit dimension must be at least 2, got {0}")]
    InvalidDimension(usize),

    #[error("system must contain at least one {what}")]
    EmptySystem { what: &'static str },

    #[error("state space dimension {dim} exceeds the size bound {bound}")]
    SizeBound { dim: usize, bound: usize },

    #[error("{what} index {index} out of range 1..={max}")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        max: usize,
    },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("coefficient vector has length {got}, expected {expected}")]
    CoefficientLength { got: usize, expected: usize },

    #[error("coefficients violate the unitarity constraint (residual {residual:.3e})")]
    NonUnitaryCoefficients { residual: f64 },

    #[error("point is not a solution of the braid constraints (residual {residual:.3e} > {tol:.1e})")]
    NotASolution { residual: f64, tol: f64 },

    #[error("parity eigenbasis is only available for odd parity indices, got {0}")]
    EvenParityIndex(usize),

    #[error("braid leaks out of the computational subspace (leakage {leakage:.3e})")]
    Leakage { leakage: f64 },

    #[error("cannot parse braid word: {0}")]
    BraidParse(String),

    #[error("group closure exceeded the limit of {limit} elements")]
    LimitExceeded { limit: usize },

    #[error("inconsistent tableaux: {0}")]
    Tableau(String),

    #[error("construction invariant violated: {0}")]
    Invariant(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
