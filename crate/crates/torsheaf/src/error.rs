use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("out of range: {0}")]
    Range(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("constant term is not a unit")]
    NotInvertible,
    #[error("outside the domain: {0}")]
    Domain(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("illegal parameter: {0}")]
    Parameter(String),
    #[error("drop is not minimal: {0}")]
    Minimality(String),
    #[error("not contained: {0}")]
    Containment(String),
    #[error("invalid multifiltration: {0}")]
    Invalid(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("window did not stabilize: {0}")]
    Stabilization(String),
    #[error("search exhausted: {0}")]
    SearchExhausted(String),
    #[error("coordinate overflow: {0}")]
    Overflow(String),
    /// A cross-check between two independent computations failed.
    #[error("internal consistency check failed: {0}")]
    Consistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
