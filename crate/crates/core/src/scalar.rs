//! Floating-point abstraction for all phase-space math.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive};

/// Scalar type underlying Wigner functions, channel coefficients and
/// quadratures: `f32` or `f64`.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + Debug + Display + Send + Sync + 'static
{
    /// Convert an `f64` constant into the scalar type.
    fn real(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 constant")
    }

    /// 2 as a scalar.
    fn two() -> Self {
        Self::one() + Self::one()
    }

    /// 1/2 as a scalar.
    fn half() -> Self {
        Self::one() / Self::two()
    }

    /// 4 as a scalar.
    fn four() -> Self {
        Self::two() + Self::two()
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
