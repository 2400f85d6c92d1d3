use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("degenerate Möbius map: ad - bc = 0")]
    DegenerateMobius,

    /// Numerical work could not be certified even at the maximal precision.
    #[error("indeterminate after {precision_bits} bits: {reason}")]
    Indeterminate { precision_bits: u32, reason: String },

    #[error("internal consistency check failed: {0}")]
    Internal(String),

    #[error("search exhausted: {0}")]
    SearchExhausted(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
