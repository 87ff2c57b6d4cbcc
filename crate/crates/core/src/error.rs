use thiserror::Error;

/// Everything that can go wrong inside the laboratory.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("expected {expected} grid values, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("symbol `{label}` is not finite at frequency {frequency:?}")]
    NonFiniteSymbol { label: String, frequency: Vec<f64> },

    #[error("exponent {0} is outside the admissible range")]
    InvalidExponent(f64),

    #[error("homogeneous norm of negative order is undefined for a field with nonzero mean")]
    NonzeroMean,

    #[error("operation requires d = k, got d = {d}, k = {k}")]
    DimensionMismatch { d: usize, k: u32 },

    #[error("frequency projection is empty (L2 norm {norm:e})")]
    EmptyShell { norm: f64 },

    #[error("field is identically zero")]
    ZeroField,

    #[error("trajectory is empty or too short")]
    EmptyTrajectory,

    #[error("dyadic {m} exceeds the grid Nyquist frequency {nyquist}")]
    AboveNyquist { m: f64, nyquist: f64 },

    #[error("blow-up suspected at t = {time}")]
    BlowUp { time: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("decode error: {0}")]
    Decode(String),
}

pub type Result<T> = std::result::Result<T, Error>;
