//! Scalar element types for lattice fields.
//!
//! Fields are generic over the scalar so the same operator algebra runs in
//! exact integer arithmetic (where every identity must hold bit-for-bit) and
//! in floating point (where residuals are compared against tolerances).

use std::fmt::{Debug, Display};

/// Ring operations needed by the calculus. `EXACT` marks integer-like types:
/// operations that would require real division (nonuniform gaps, sampled
/// continuous axes) refuse to run on them.
pub trait Scalar:
    Copy + PartialEq + Debug + Display + Send + Sync + serde::Serialize + 'static
{
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn add(self, other: Self) -> Self;
    fn sub(self, other: Self) -> Self;
    fn mul(self, other: Self) -> Self;
    fn neg(self) -> Self;
    /// Magnitude used for norms and tolerance checks.
    fn abs_f64(self) -> f64;
    /// Divide by a real grid weight. `None` when the type cannot represent it.
    fn div_real(self, w: f64) -> Option<Self>;
    /// Multiply by a real grid weight. `None` when the type cannot represent it.
    fn mul_real(self, w: f64) -> Option<Self>;

    fn is_zero(self) -> bool {
        self == Self::zero()
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn sub(self, other: Self) -> Self {
        self - other
    }
    fn mul(self, other: Self) -> Self {
        self * other
    }
    fn neg(self) -> Self {
        -self
    }
    fn abs_f64(self) -> f64 {
        self.abs()
    }
    fn div_real(self, w: f64) -> Option<Self> {
        Some(self / w)
    }
    fn mul_real(self, w: f64) -> Option<Self> {
        Some(self * w)
    }
}

impl Scalar for i64 {
    const EXACT: bool = true;

    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn add(self, other: Self) -> Self {
        self.checked_add(other).expect("integer overflow in field arithmetic")
    }
    fn sub(self, other: Self) -> Self {
        self.checked_sub(other).expect("integer overflow in field arithmetic")
    }
    fn mul(self, other: Self) -> Self {
        self.checked_mul(other).expect("integer overflow in field arithmetic")
    }
    fn neg(self) -> Self {
        -self
    }
    fn abs_f64(self) -> f64 {
        (self as f64).abs()
    }
    fn div_real(self, _w: f64) -> Option<Self> {
        None
    }
    fn mul_real(self, _w: f64) -> Option<Self> {
        None
    }
}
