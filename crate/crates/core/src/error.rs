use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Caller violated a structural precondition (mismatched jets, bad sizes).
    #[error("usage error: {0}")]
    Usage(String),

    #[error("division by a non-unit jet: leading coefficient {b0} is negligible against {scale:e}")]
    DivisionByNonUnit { b0: Complex64, scale: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("input error: {0}")]
    Input(String),

    #[error("insufficient data: need s_0..s_{needed}, have s_0..s_{available}")]
    InsufficientData { needed: usize, available: usize },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("synthesis degeneracy: {0}")]
    SynthesisDegeneracy(String),

    #[error("construction failed: {0}")]
    ConstructionFailure(String),

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    /// The classifier and the synthesis route disagree about the data.
    #[error("data inconsistency: {0}")]
    DataInconsistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
