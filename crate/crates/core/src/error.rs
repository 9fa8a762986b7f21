use std::fmt;

use crate::dsl::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Source region of a DSL fragment, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, serde::Serialize)]
pub struct Span {
    pub line: usize,
    pub col: usize,
    pub end_line: usize,
    pub end_col: usize,
}

impl Span {
    /// The region from the start of `self` to the end of `other`.
    pub fn to(self, other: Span) -> Span {
        Span { line: self.line, col: self.col, end_line: other.end_line, end_col: other.end_col }
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("unknown relation {0}")]
    UnknownRelation(String),
    #[error("unknown item {0}")]
    UnknownItem(String),
    #[error("invalid level {level}: {reason}")]
    InvalidLevel { level: usize, reason: String },
    #[error("score evaluation failed on {item}: {reason}")]
    Score { item: String, reason: String },
    #[error("mapping failed on {item}: {reason}")]
    Mapping { item: String, reason: String },
    #[error("arity mismatch: {0}")]
    Arity(String),
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("unknown state {0}")]
    UnknownState(String),
    #[error("unsupported shape: {0}")]
    UnsupportedShape(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("relation {0} already exists")]
    RelationExists(String),
    #[error("unbound name {0}")]
    Unbound(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("malformed grammar: {0}")]
    Grammar(String),
    #[error("limit exceeded: {0}")]
    Limit(String),
    #[error("line {line}: {reason}")]
    Ingest { line: usize, reason: String },
    #[error("dataset fingerprint mismatch: session expects {expected}, dataset is {found}")]
    Fingerprint { expected: String, found: String },
    #[error("profile: {0}")]
    Profile(String),
    #[error("fixture scale {0} is outside [50, 5000]")]
    Scale(usize),
    #[error("{span}: {source}")]
    At { span: Span, source: Box<Error> },
}

impl Error {
    pub fn at(self, span: Span) -> Error {
        match self {
            e @ Error::At { .. } => e,
            e => Error::At { span, source: Box::new(e) },
        }
    }

    pub fn span(&self) -> Option<Span> {
        match self {
            Error::At { span, .. } => Some(*span),
            Error::Parse(p) => Some(p.span),
            _ => None,
        }
    }

    /// The error with any span wrapper removed.
    pub fn root(&self) -> &Error {
        match self {
            Error::At { source, .. } => source.root(),
            e => e,
        }
    }

    pub fn arg(msg: impl Into<String>) -> Error {
        Error::Argument(msg.into())
    }
}
