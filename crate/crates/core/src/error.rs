use thiserror::Error;

/// Crate-wide error type. Variants map onto the CLI exit codes:
/// usage/input problems exit 2, capacity limits exit 3, verification
/// failures exit 1.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A move that breaks the rules of the game. The engine rejects such
    /// moves, it never repairs them.
    #[error("rule violation: {0}")]
    RuleViolation(String),

    /// The game state does not support the requested query.
    #[error("invalid game state: {0}")]
    State(String),

    /// A strategy produced an illegal move; names the offender.
    #[error("strategy fault in `{strategy}`: {reason}")]
    StrategyFault { strategy: String, reason: String },

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("verification failure: {0}")]
    Verification(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
