use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("backend mismatch: {0}")]
    BackendMismatch(String),
    #[error("endpoint mismatch: {0}")]
    EndpointMismatch(String),
    #[error("invalid object: {0}")]
    InvalidObject(String),
    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),
    #[error("degree shift leaves the window [-{window}, {window}]")]
    WindowOverflow { window: usize },
    #[error("enumeration bound exceeded: {0}")]
    BoundExceeded(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("not an E-triangle: {0}")]
    NotATriangle(String),
    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Returns `Err(Error::Verification)` with the message when `cond` is false.
pub(crate) fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Verification(msg()))
    }
}
