use thiserror::Error;

/// Errors produced by the toolkit.
///
/// `GateRefused` is not a failure of the code but of a mathematical
/// hypothesis: a condition estimate or contraction constant fell outside
/// the range in which the requested construction is certified.
#[derive(Debug, Error)]
pub enum Error {
    #[error("rejected input: {0}")]
    RejectedInput(String),

    #[error("domain mismatch: {0}")]
    DomainMismatch(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("gate refused: {0}")]
    GateRefused(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn rejected(msg: impl Into<String>) -> Self {
        Error::RejectedInput(msg.into())
    }

    pub fn mismatch(msg: impl Into<String>) -> Self {
        Error::DomainMismatch(msg.into())
    }

    pub fn gate(msg: impl Into<String>) -> Self {
        Error::GateRefused(msg.into())
    }

    /// True when the error is a mathematical gate refusal rather than bad input.
    pub fn is_gate_refusal(&self) -> bool {
        matches!(self, Error::GateRefused(_))
    }
}
