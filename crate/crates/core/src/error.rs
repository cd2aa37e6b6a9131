use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("regex error at offset {offset}: {message}")]
    Regex { offset: usize, message: String },

    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),

    #[error("symbol '{0}' is not in the alphabet")]
    OutOfAlphabet(char),

    #[error("invalid machine: {0}")]
    InvalidMachine(String),

    #[error("primitive root of the empty word is undefined")]
    EmptyWord,

    #[error("cycle words {0} and {1} commute")]
    CommutingPair(String, String),

    #[error("filter is easy (bounded); a hardness witness is required")]
    NotHard,

    #[error("filter is hard; a bounded decomposition is required")]
    NotEasy,

    #[error("invalid hardness witness: {0}")]
    InvalidWitness(String),

    #[error("malformed bounded expression: {0}")]
    MalformedExpr(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("certificate verification failed: {0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
