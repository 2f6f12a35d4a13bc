use thiserror::Error;

use crate::perm::PermError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error("syntax error at offset {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("bad permutation literal at offset {pos}: {message}")]
    BadLiteral { pos: usize, message: String },
    #[error("arity violation: {0}")]
    Arity(String),
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// A guarantee that should always hold did not; indicates a bug.
    #[error("contract violation: {0}")]
    ContractViolation(String),
    #[error("unknown check {0:?}")]
    UnknownCheck(String),
}

impl Error {
    pub fn is_resource_limit(&self) -> bool {
        matches!(self, Error::ResourceLimit(_))
    }

    pub fn is_parse(&self) -> bool {
        matches!(
            self,
            Error::Syntax { .. } | Error::BadLiteral { .. } | Error::Arity(_) | Error::Perm(PermError::Parse { .. })
        )
    }
}
