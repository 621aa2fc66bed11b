use thiserror::Error;

/// What went wrong while reading an automaton document.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("missing transition for state `{state}` on letter `{letter}`")]
    MissingTransition { state: String, letter: String },
    #[error("duplicate transition for state `{state}` on letter `{letter}`")]
    DuplicateTransition { state: String, letter: String },
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("empty alphabet")]
    EmptyAlphabet,
    #[error("empty stateset")]
    EmptyStateset,
    #[error("duplicate name `{0}`")]
    DuplicateName(String),
    #[error("invalid name `{0}`")]
    InvalidName(String),
    #[error("syntax error: {0}")]
    Syntax(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("invalid automaton: {0}")]
    InvalidAutomaton(String),
    #[error("automaton is not invertible")]
    NotInvertible,
    #[error("automaton is not reversible")]
    NotReversible,
    #[error("alphabets differ")]
    AlphabetMismatch,
    #[error("budget exceeded: {what} (limit {limit}, explored {explored})")]
    BudgetExceeded {
        what: &'static str,
        limit: usize,
        explored: usize,
    },
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("no word found: {0}")]
    NotFound(String),
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
}

impl Error {
    pub(crate) fn budget(what: &'static str, limit: usize, explored: usize) -> Self {
        Error::BudgetExceeded { what, limit, explored }
    }

    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
