use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoreError {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("resource cap exceeded: {what} needs {needed}, cap is {cap}")]
    Resource {
        what: &'static str,
        needed: u128,
        cap: u128,
    },

    #[error("degenerate curve: rank {rank} < {expected}")]
    Degenerate { rank: usize, expected: usize },

    #[error("truncation {truncation} insufficient: {pivots} of {expected} pivots found")]
    TruncationInsufficient {
        truncation: usize,
        pivots: usize,
        expected: usize,
    },

    #[error("unknown suite {0:?}; expected one of diagrams, tableaux, sums, wedge, expcurve, all")]
    UnknownSuite(String),

    #[error("degenerate associated curve: Plücker coefficient of {0} vanishes; perturb the frequencies")]
    VanishingCoefficient(String),
}

impl CoreError {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        CoreError::InvalidInput(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, CoreError>;
