use thiserror::Error;

use crate::square::Violation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid square: {}", format_violations(.0))]
    InvalidSquare(Vec<Violation>),

    #[error("invalid move: {0}")]
    InvalidMove(String),

    #[error("cycle does not match the square: {0}")]
    InvalidCycle(String),

    #[error("square is proper, an improper cell is required")]
    NotImproper,

    #[error("row {row} does not hold symbol {symbol} in column {col}")]
    MismatchedRows {
        row: usize,
        col: usize,
        symbol: usize,
    },

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("order mismatch: {0} vs {1}")]
    OrderMismatch(usize, usize),

    #[error("order {0} is too small for the chain (need n >= 2)")]
    DegenerateOrder(usize),

    #[error("order {n} exceeds the limit {limit}")]
    TooLarge { n: usize, limit: usize },

    #[error("sample is not a member of the universe")]
    UnknownSquare,

    #[error("insufficient samples: have {have}, need at least {need}")]
    InsufficientSamples { have: usize, need: usize },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

fn format_violations(v: &[Violation]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}
