//! Error types shared across the library.

/// Library-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;

/// Everything that can go wrong outside of plain "no solution exists"
/// answers (those are encoded as `Option`/decision enums, not errors).
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("need at least 2 oscillators, got {0}")]
    TooFewOscillators(usize),

    #[error("non-finite value encountered")]
    NonFinite,

    #[error("frequency vector not mean-zero: |Σω| = {sum_abs:.3e} exceeds tolerance {tol:.3e}")]
    NotMeanZero { sum_abs: f64, tol: f64 },

    #[error("κ_{index} = {value:.3e} lies within the degeneracy tolerance; D is numerically singular")]
    SingularD { index: usize, value: f64 },

    #[error("degenerate configuration: {reason}")]
    Degenerate { reason: String },

    #[error("denominator Σᵢⱼ cos(θᵢ−θⱼ) is numerically zero")]
    DegenerateDenominator,

    #[error("inconsistent input: {reason}")]
    InconsistentInput { reason: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("averaging window {window} exceeds the trajectory span {span}")]
    WindowTooLong { window: f64, span: f64 },
}
