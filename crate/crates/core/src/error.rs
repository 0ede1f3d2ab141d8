use thiserror::Error;

/// Errors raised by every fallible operation in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("group mismatch: expected {expected}, found {found}")]
    GroupMismatch { expected: String, found: String },

    #[error("element {element} does not lie in {group}")]
    ElementOutOfRange { element: u64, group: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("{a} is not invertible modulo {modulus}")]
    NotInvertible { a: u64, modulus: u64 },

    #[error("modulus {0} is not prime")]
    NotPrime(u64),

    #[error("{what}: estimated cost {cost:.3e} exceeds budget {budget:.3e}")]
    BudgetExceeded { what: String, cost: f64, budget: f64 },

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("retries exhausted after {0} attempts")]
    RetriesExhausted(usize),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Toml(#[from] toml::de::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn budget_check(what: &str, cost: f64, budget: f64) -> Result<()> {
    if cost > budget {
        Err(Error::BudgetExceeded { what: what.to_string(), cost, budget })
    } else {
        Ok(())
    }
}
