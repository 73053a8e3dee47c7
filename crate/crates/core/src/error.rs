use thiserror::Error;

/// Errors raised by every fallible operation in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid Dickson pair ({q},{n}): {reason}")]
    InvalidPair { q: u64, n: u64, reason: String },

    #[error("order {order} exceeds limit {limit}")]
    OrderTooLarge { order: u64, limit: u64 },

    #[error("no irreducible polynomial of degree {degree} over GF({p})")]
    NoIrreducible { p: u64, degree: u32 },

    #[error("internal fault: {0}")]
    Internal(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("malformed element {token:?}: {msg}")]
    Element { token: String, msg: String },

    #[error("budget exceeded: {needed} elements needed, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },

    #[error("field has no witness")]
    NoWitness,

    #[error("index undefined: gen ≠ R^{m}")]
    IndexUndefined { m: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("map is not linear")]
    NotLinear,

    #[error("trace replay failed at step {step}: {msg}")]
    Replay { step: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_budget(needed: u128, budget: u64) -> Result<()> {
    if needed > budget as u128 {
        Err(Error::BudgetExceeded { needed, budget })
    } else {
        Ok(())
    }
}
