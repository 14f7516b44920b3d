use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Malformed hypergraph or family file.
    #[error("line {line}: {msg}")]
    Format { line: usize, msg: String },

    /// An argument outside the domain of the operation.
    #[error("{0}")]
    Domain(String),

    /// A request that would exceed a configured resource cap.
    #[error("refused: {what} is {actual}, cap is {cap}")]
    Refused {
        what: &'static str,
        actual: usize,
        cap: usize,
    },

    /// The wall-clock budget ran out mid-computation.
    #[error("time budget exhausted")]
    Deadline,
}

impl Error {
    pub(crate) fn format(line: usize, msg: impl Into<String>) -> Self {
        Error::Format {
            line,
            msg: msg.into(),
        }
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for errors caused by resource caps rather than bad input.
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::Refused { .. } | Error::Deadline)
    }
}
