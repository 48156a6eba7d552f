use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Source/target or ambient groups of the operands do not line up.
    #[error("structural mismatch: {0}")]
    Structural(String),

    /// Caller supplied data violating a documented precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A documented input invariant (e.g. trivial intersection of a tower) failed.
    #[error("invariant violated: {check}")]
    InvariantViolation { check: &'static str },

    /// A group-theoretic identity that must hold did not; this is a bug.
    #[error("internal check failed: {check}")]
    Internal { check: &'static str },

    /// Enumeration would exceed the configured size bound.
    #[error("size limit exceeded: {0}")]
    SizeLimit(String),

    /// An invariant factor or residue does not fit in 64 bits.
    #[error("arithmetic overflow: {0}")]
    Overflow(String),
}

impl Error {
    pub(crate) fn structural(msg: impl Into<String>) -> Self {
        Error::Structural(msg.into())
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
