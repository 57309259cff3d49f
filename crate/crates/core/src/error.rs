use thiserror::Error;

use crate::rat::Rat;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} lies outside [-1, 1]")]
    Domain(Rat),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("{0} is not a point of the exceptional set within depth {1}")]
    NotAnEPoint(Rat, usize),

    #[error("witness search exhausted its budget: {0}")]
    SearchBudgetExhausted(String),

    #[error("orbit of {0} unresolved within depth {1}")]
    DepthExhausted(Rat, usize),

    #[error("cell index {0} does not fit a machine integer")]
    IndexOverflow(String),

    #[error("malformed rational {0:?}")]
    Parse(String),

    #[error("unknown suite {0:?}")]
    UnknownSuite(String),
}
