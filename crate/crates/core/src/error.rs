use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid ring: {0}")]
    InvalidRing(String),

    #[error("arithmetic error: {0}")]
    Arithmetic(String),

    #[error("ring mismatch: {0}")]
    RingMismatch(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("order {order} exceeds the configured cap {cap}")]
    OrderCap { order: usize, cap: usize },

    #[error("invalid construction: {0}")]
    Construction(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("not a permutation: {0}")]
    NotPermutation(String),

    #[error("not a subgroup: generator {index} is not contained in the supergroup")]
    NotSubgroup { index: usize },

    #[error("search budget of {budget} nodes exhausted")]
    BudgetExceeded { budget: u64 },

    #[error("invalid witness: {0}")]
    InvalidWitness(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
