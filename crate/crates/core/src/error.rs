use thiserror::Error;

/// Position of a syntax error, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Position {
    pub line: usize,
    pub column: usize,
}

impl std::fmt::Display for Position {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("syntax error at {position}: {message}")]
    Syntax { position: Position, message: String },

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("model is incomplete: no transition for state {state} under joint action {action}")]
    MissingTransition { state: String, action: String },

    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("history of {length} steps is shorter than the formula horizon {horizon}")]
    HistoryTooShort { length: usize, horizon: usize },

    #[error("outcome is unsatisfiable: no history of length {length} satisfies it")]
    OutcomeUnsatisfiable { length: usize },

    #[error("outcome is unavoidable: every history of length {length} satisfies it")]
    OutcomeUnavoidable { length: usize },

    #[error("reference language has probability zero; probabilistic degree is undefined")]
    ZeroProbability,

    #[error("power iteration did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn unknown(kind: &'static str, name: impl Into<String>) -> Self {
        Error::Unknown {
            kind,
            name: name.into(),
        }
    }
}
