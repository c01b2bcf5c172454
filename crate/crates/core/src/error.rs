use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid group parameters G({m},{p},{n}): {reason}")]
    InvalidGroup { m: u32, p: u32, n: u32, reason: String },

    #[error("variable count mismatch: {0} vs {1}")]
    NvarsMismatch(usize, usize),

    #[error("index {index} out of range for {nvars} variables")]
    IndexOutOfRange { index: usize, nvars: usize },

    #[error("{what} needs about {estimate} matrix entries, over the budget of {budget}")]
    Infeasible { what: String, estimate: u64, budget: u64 },

    #[error("quotient is not finite dimensional: no pure power of x{0} among the leading monomials")]
    InfiniteQuotient(usize),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("integrity failure: {0}")]
    Integrity(String),

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
}
