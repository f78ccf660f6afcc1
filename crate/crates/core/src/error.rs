use std::io;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A residue condition required by the LPS construction does not hold.
    #[error("construction unsupported: {0}")]
    Unsupported(String),

    #[error("resource limit: {0}")]
    Resource(String),

    #[error("generators span {reached} of {expected} group elements")]
    NotGenerating { reached: u64, expected: u64 },

    #[error("eigensolver did not converge after {iterations} iterations (last interval [{lower}, {upper}])")]
    Convergence { iterations: usize, lower: f64, upper: f64 },

    #[error("bad graph file: {0}")]
    Format(String),

    #[error("checksum mismatch: stored {stored:#018x}, computed {computed:#018x}")]
    Checksum { stored: u64, computed: u64 },

    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
