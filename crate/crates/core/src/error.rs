use thiserror::Error;

/// Failures raised by the simulator.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("invalid time grid: {0}")]
    InvalidGrid(String),
    #[error("symbol {symbol} at position {position} does not fit in {bit_depth} bit(s)")]
    SymbolOutOfRange {
        position: usize,
        symbol: u32,
        bit_depth: u32,
    },
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("bit depth mismatch: {left} vs {right}")]
    BitDepthMismatch { left: u32, right: u32 },
    #[error("empty input")]
    EmptyInput,
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("degenerate calibration: bucket range is zero (lo = hi = {level})")]
    DegenerateCalibration { level: f64 },
    #[error("not enough shots: need at least {required}, have {actual}")]
    NotEnoughShots { required: u64, actual: u64 },
    #[error("flat channel: {0} has zero variance")]
    FlatChannel(&'static str),
    #[error("mean reference total is zero")]
    ZeroReferenceMean,
    #[error("no idler clicks recorded")]
    NoIdlerClicks,
    #[error("gate profile: {0}")]
    GateProfile(String),
}

pub type Result<T, E = SimError> = std::result::Result<T, E>;
