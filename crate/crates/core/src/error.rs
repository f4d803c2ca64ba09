use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("characteristic {0} is not a prime below 2^31")]
    NotPrime(u64),

    #[error("operands belong to different rings")]
    RingMismatch,

    #[error("exponent overflow")]
    ExponentOverflow,

    #[error("syntax error at column {column}: {message}")]
    Syntax { column: usize, message: String },

    #[error("unknown variable `{name}` at column {column}")]
    UnknownVariable { name: String, column: usize },

    #[error("computation budget exceeded: {what} limit {limit}")]
    BudgetExceeded { what: &'static str, limit: usize },

    #[error("quotient has infinite length (ideal is not primary to the maximal ideal)")]
    InfiniteColength,

    #[error("ideal is not primary to the maximal ideal")]
    NotMPrimary,

    #[error("rank mismatch: {0}")]
    RankMismatch(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("line {line}, column {column}: {message}")]
    Problem {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("duplicate name `{0}`")]
    DuplicateName(String),

    #[error("unknown reference `{0}`")]
    UnknownReference(String),
}

impl Error {
    /// True for errors caused by exhausting a configured computation budget.
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. })
    }
}
