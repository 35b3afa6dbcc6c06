//! Error type shared by all modules.

use thiserror::Error;

/// Library-wide error enum.
///
/// The CLI maps these onto its exit-code contract: domain/precondition/
/// identification/consistency/capability/parse errors are usage errors
/// (exit 2), `Resource` is the resource cap (exit 3) and `Internal` is an
/// invariant violation (exit 1).
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precondition error: {0}")]
    Precondition(String),
    #[error("identification error: {0}")]
    Identification(String),
    #[error("consistency error: {0}")]
    Consistency(String),
    #[error("capability error: {0}")]
    Capability(String),
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    #[error("internal invariant violation: {0}")]
    Internal(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
