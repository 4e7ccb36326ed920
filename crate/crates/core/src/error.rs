use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("invalid alphabet: {0}")]
    Alphabet(String),
    #[error("malformed automaton: {0}")]
    Automaton(String),
    #[error("{what} budget exceeded (limit {limit})")]
    Budget { what: &'static str, limit: u64 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// A verified property does not hold on the given input.
    #[error("check failed: {0}")]
    Check(String),
}

impl Error {
    pub fn budget(what: &'static str, limit: impl TryInto<u64>) -> Self {
        Error::Budget {
            what,
            limit: limit.try_into().unwrap_or(u64::MAX),
        }
    }

    pub fn is_budget(&self) -> bool {
        matches!(self, Error::Budget { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
