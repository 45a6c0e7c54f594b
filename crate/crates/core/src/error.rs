use thiserror::Error;

/// Errors raised by the workbench. Verdicts that are legitimately negative
/// ("not acyclic", "no solution") are values, not errors.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("morphism is not well defined: {0}")]
    IllDefined(String),
    #[error("ill-typed diagram: {0}")]
    IllTyped(String),
    #[error("not a chain map: {0}")]
    NotChainMap(String),
    #[error("square does not commute")]
    NonCommuting,
    #[error("square is not a pullback")]
    NotPullback,
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("subcategory {sub} provides no cover of {object}")]
    NoCover { sub: String, object: String },
    #[error("terms are not members of {0}")]
    NotMembers(String),
    #[error("resolution depth {max_len} exceeded")]
    DepthExceeded { max_len: usize },
    #[error("infinite resolution dimension: {0}")]
    InfiniteResdim(String),
    #[error("unknown name: {0}")]
    UnknownName(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
