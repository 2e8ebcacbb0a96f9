//! Exact noncommutative algebra on the quantum plane (yx = qxy) and the
//! symbolic verification of the second-order variable-coefficient equation
//! living on it.

pub mod calculus;
pub mod poly;
pub mod qrat;

pub use calculus::{
    conj_qderiv, qderiv, solve_conjugate_kernel, solve_polynomial_kernel, verify_qplane_example,
    zeta_component, Axis2, QPlaneEquation, VerificationReport, ZetaDir,
};
pub use poly::QPoly;
pub use qrat::QRat;
