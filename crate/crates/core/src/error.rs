use thiserror::Error;

/// Errors produced by parsers, constructors, and solvers.
#[derive(Debug, Error)]
pub enum Error {
    /// Input file or literal could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),

    /// Interval data violates a structural requirement (b < a, bad ids, ...).
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    /// Exact mode was asked for a value that has no exact representation.
    #[error("exact-mode error: {0}")]
    Mode(String),

    /// A solver precondition (structure or cost-function flag) does not hold.
    #[error("precondition not met: {0}")]
    Precondition(String),

    /// Instance exceeds the subset-DP size cap.
    #[error("instance size {n} exceeds oracle cap {cap}")]
    TooLarge { n: usize, cap: usize },

    /// Generator parameters are out of range or inconsistent.
    #[error("invalid parameters: {0}")]
    Params(String),
}

pub type Result<T> = std::result::Result<T, Error>;
