use crate::interval::IntervalId;

/// Errors raised by engines, parsers and harnesses.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("interval {0} is already live")]
    DuplicateId(IntervalId),
    #[error("interval {0} is not live")]
    UnknownId(IntervalId),
    #[error("invalid interval {id}: [{left}, {right}] (need finite left < right)")]
    InvalidInterval {
        id: IntervalId,
        left: f64,
        right: f64,
    },
    #[error("interval {id} lies outside the universe 0..{universe}")]
    OutOfUniverse { id: IntervalId, universe: u64 },
    #[error("interval {id} has length {length}, outside [1, {max})")]
    LengthOutOfRange {
        id: IntervalId,
        length: f64,
        max: u64,
    },
    #[error("interval {id} breaks nestedness against interval {other}")]
    NotNested { id: IntervalId, other: IntervalId },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("operation not supported by {engine}: {what}")]
    Unsupported { engine: String, what: String },
    #[error("interval {0} has no color")]
    MissingColor(IntervalId),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("internal invariant failure: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
