use thiserror::Error;

/// Errors shared across the crate. Negative verdicts (a form not being
/// represented, a truant scan running out of cap) are ordinary return values,
/// not errors; these variants are reserved for genuinely invalid inputs.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("form is not positive definite")]
    NotPositiveDefinite,

    #[error("gram matrix is not symmetric at ({row},{col})")]
    NotSymmetric { row: usize, col: usize },

    #[error("diagonal entry {value} at index {index} is not positive")]
    NonPositiveEntry { index: usize, value: i64 },

    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("escalation target is represented, so it is not a truant")]
    NotATruant,

    #[error("witness target already belongs to the excluded-from set")]
    TargetInT,

    #[error("witness target is not a member of the built-in criterion set")]
    TargetNotInS2,
}

pub type Result<T> = std::result::Result<T, Error>;
