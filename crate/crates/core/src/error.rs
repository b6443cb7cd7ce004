use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("dimension mismatch for `{name}`: expected {expected}, got {got}")]
    DimensionMismatch {
        name: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("unsupported operation: {0}")]
    Unsupported(&'static str),

    #[error("support enumeration over {dim} coordinates exceeds the cap of {cap}")]
    SupportTooLarge { dim: usize, cap: usize },

    #[error("instance too large: {what} exceeded {cap}")]
    InstanceTooLarge { what: &'static str, cap: u64 },

    #[error("missing hypothesis: {0}")]
    MissingHypothesis(&'static str),

    #[error("theory falsified by `{check}` at step {step}: lhs {lhs:e} > rhs {rhs:e}")]
    TheoryFalsified {
        check: &'static str,
        step: u64,
        lhs: f64,
        rhs: f64,
    },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn check_dim(name: &'static str, expected: usize, got: usize) -> Result<()> {
        if expected == got {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                name,
                expected,
                got,
            })
        }
    }
}
