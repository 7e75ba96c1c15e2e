use thiserror::Error;

use crate::puzzle::Letter;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid assignment: {0}")]
    InvalidAssignment(String),

    #[error("invalid swap: both letters are {0}")]
    InvalidSwap(Letter),

    #[error("imitation requires the target to differ from the model")]
    IdenticalAgents,

    #[error("invalid search parameters: {0}")]
    InvalidParams(String),

    #[error("permutation index {0} out of range (must be < 3628800)")]
    IndexOutOfRange(u64),

    #[error("board size {0} out of range 1..=351")]
    BoardSizeOutOfRange(usize),

    #[error("insufficient data: need at least {needed} uncensored samples, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("computational cost must be positive, got {0}")]
    NonPositiveCost(f64),

    #[error("phi is undefined: no run made a hint selection")]
    UndefinedPhi,

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
