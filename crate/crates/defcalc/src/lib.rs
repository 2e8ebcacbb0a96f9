//! Deformed discrete differential calculus with synthesized conservation laws.
//!
//! The crate implements a calculus whose Leibniz rule is deformed by an
//! invertible shift operator ζ, checks an admissibility condition on
//! variable-coefficient equations, synthesizes the bilinear current kernels
//! Γ, Γ̂, Γ̃, Γ̂̃ (by closed form and by coefficient recursion), and verifies
//! the resulting conservation laws and charge towers on lattice models
//! (Toda variants, principal chiral model) and symbolically on the quantum
//! plane.
//!
//! Entry points:
//! - [`field::LatticeField`] and the operations in [`calculus`] for the
//!   deformed derivatives, shifts, and integrals;
//! - [`equation::EquationSpec`] / [`gamma`] for admissibility checks and
//!   current-kernel synthesis;
//! - [`qplane`] for the exact rational-in-q quantum plane algebra;
//! - [`models`] for integrable-model presets and λ-expansion towers;
//! - [`conservation`] for currents, divergence residuals, and charges;
//! - [`cli`] for the command-line front end (`check`, `synthesize`,
//!   `run-model`, `tower`, `qplane-verify`).
//!
//! The `examples/` directory holds one runnable example per capability.

pub mod calculus;
pub mod cli;
pub mod config;
pub mod conservation;
pub mod equation;
pub mod error;
pub mod field;
pub mod fixtures;
pub mod gamma;
pub mod grid;
pub mod models;
pub mod qplane;
pub mod report;
pub mod scalar;

pub use calculus::{leibniz_residuals, Deriv, InverseDiffResult};
pub use equation::{ConditionReport, EquationSpec};
pub use error::{CalcError, Result};
pub use field::LatticeField;
pub use gamma::GammaOperator;
pub use grid::{AxisKind, AxisSpec, Boundary, CalculusSpec, ShiftOrientation};
pub use scalar::Scalar;
