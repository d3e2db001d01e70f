use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A configuration or transition refers to a state or symbol the machine does not define.
    #[error("specification violation: {0}")]
    SpecViolation(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    /// A construction would exceed a configured size limit.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("operation not supported: {0}")]
    Unsupported(String),

    /// Two independent evaluations of the same quantity disagree.
    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
