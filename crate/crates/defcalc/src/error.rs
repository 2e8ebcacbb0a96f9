//! Error types shared across the crate.

use thiserror::Error;

#[derive(Error, Debug)]
pub enum CalcError {
    #[error("axis {axis} does not support this operation: {reason}")]
    UnsupportedAxis { axis: usize, reason: String },

    #[error("exact integer mode cannot run this operation: {0}")]
    ExactModeUnsupported(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("matrix dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("axis index {axis} out of range (grid has {naxes} axes)")]
    AxisOutOfRange { axis: usize, naxes: usize },

    #[error("shift power {power} exceeds axis size {size}")]
    ShiftTooLarge { power: i64, size: usize },

    #[error("equation coefficients do not satisfy the admissibility condition (worst residual {worst:.3e} > tol {tol:.3e})")]
    Inadmissible { worst: f64, tol: f64 },

    #[error("coefficient recursion inconsistent: equation {equation} violated with residual {residual:.3e}")]
    SynthesisFailure { equation: String, residual: f64 },

    #[error("time integration unstable: {0}")]
    Unstable(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, CalcError>;
