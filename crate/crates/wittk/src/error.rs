use thiserror::Error;

/// Every fallible operation in the crate reports one of these.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ring descriptor mismatch: {0}")]
    DescriptorMismatch(String),
    #[error("non-integral division: {0}")]
    NonIntegral(String),
    #[error("ring is infinite: {0}")]
    InfiniteRing(String),
    #[error("size cap exceeded: {what} (limit {limit})")]
    CapExceeded { what: String, limit: u64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("tower does not stabilize within {window} stages")]
    NoStabilization { window: usize },
    #[error("precision insufficient: {0}")]
    PrecisionInsufficient(String),
    #[error("not an Eisenstein polynomial: {0}")]
    NotEisenstein(String),
    #[error("inconsistent local data: {0}")]
    InconsistentLocalData(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn cap(what: impl Into<String>, limit: u64) -> Self {
        Error::CapExceeded { what: what.into(), limit }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
