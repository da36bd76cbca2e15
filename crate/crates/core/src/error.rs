use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid character {found:?} at position {position}")]
    InvalidSymbol { position: usize, found: char },

    #[error("malformed word expression at position {position}: {reason}")]
    Syntax { position: usize, reason: &'static str },

    #[error("word length {len} exceeds the configured cap of {cap}")]
    TooLong { len: usize, cap: usize },

    #[error("index range [{start}:{end}] is out of bounds for a word of length {len}")]
    OutOfRange { start: usize, end: usize, len: usize },

    #[error("{name} must be {constraint}, got {value}")]
    InvalidArgument {
        name: &'static str,
        constraint: &'static str,
        value: usize,
    },

    #[error("the sturmian slope needs more continued-fraction terms to resolve symbol {index}")]
    InsufficientPrecision { index: usize },

    #[error("padded dimension of {word} did not stabilise ({first} at {first_pad} zeros, {second} at {second_pad})")]
    NonStabilization {
        word: String,
        first: usize,
        first_pad: usize,
        second: usize,
        second_pad: usize,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("search exhausted without a result: {0}")]
    SearchExhausted(String),
}

pub type Result<T> = std::result::Result<T, Error>;
