use thiserror::Error;

use crate::valuation::Valuation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("operands belong to different coefficient rings")]
    RingMismatch,

    #[error("division by an element indistinguishable from zero at precision {precision}")]
    DivisionByZero { precision: Valuation },

    #[error("element is not invertible: {0}")]
    NotInvertible(String),

    #[error("variable mismatch: expected {expected}, found {found}")]
    VariableMismatch { expected: String, found: String },

    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),

    #[error("invalid level {0}: levels start at 1")]
    InvalidLevel(u32),

    #[error("unsupported case: {0}")]
    Unsupported(String),
}
