//! Shared error type. The three classes the CLI distinguishes with exit
//! codes: domain (invalid input for an operation), size (a configured cap was
//! exceeded), capability (the input is valid but no implemented method covers
//! it).

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Input outside an operation's domain (bad graph, even A-set, point not
    /// in Q, non-cactus input, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A size cap was exceeded; `reached` reports how far the computation got
    /// so callers can decide whether raising the cap is realistic.
    #[error("size error: {msg} (reached {reached})")]
    Size { msg: String, reached: u64 },

    /// Valid input that no implemented route covers (e.g. exact P-volume of a
    /// graph that is neither a forest nor a disjoint union of cycles).
    #[error("capability error: {0}")]
    Capability(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
    pub fn size(msg: impl Into<String>, reached: u64) -> Self {
        Error::Size { msg: msg.into(), reached }
    }
    pub fn capability(msg: impl Into<String>) -> Self {
        Error::Capability(msg.into())
    }
    pub fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }

    /// CLI exit code; 0 is success, 2 is clap's usage-error code.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_) => 3,
            Error::Size { .. } => 4,
            Error::Capability(_) => 5,
            Error::Parse(_) => 2,
            Error::Io(_) => 6,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
