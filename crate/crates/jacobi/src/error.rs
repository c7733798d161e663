use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cannot parse word {input:?}: {reason}")]
    ParseWord { input: String, reason: String },

    #[error("invalid alphabet {0:?} (expected `trivial` or `gen:N:DEPTH`)")]
    AlphabetSpec(String),

    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),

    #[error("vertex {0} is not trivalent")]
    NotTrivalent(usize),

    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("a vector has support outside the spanning set of the space")]
    RelationOutsideSpan,

    #[error("relation closure exceeded {0} diagrams")]
    ClosureLimit(usize),

    #[error("precondition failed: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
