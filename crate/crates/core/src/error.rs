use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A parameter violates an augmenter's precondition.
    #[error("invalid parameter for {augmenter}: {reason}")]
    InvalidParameter {
        augmenter: &'static str,
        reason: String,
    },

    /// Input data (batch, spectrum, series) is malformed.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A pipeline configuration is inconsistent.
    #[error("invalid config: {0}")]
    InvalidConfig(String),

    /// An augmenter produced NaN or infinity. Parameters are finite but so
    /// large that the arithmetic overflowed.
    #[error("{augmenter} produced a non-finite value for series {series}")]
    NonFiniteOutput {
        augmenter: &'static str,
        series: usize,
    },
}

impl Error {
    pub(crate) fn param(augmenter: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            augmenter,
            reason: reason.into(),
        }
    }
}
