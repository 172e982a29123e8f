//! Scalar traits.
//!
//! Group arithmetic only needs a commutative ring containing ½, so it is
//! written against [`Ring`] and works for exact rationals as well as floats.
//! Everything involving trigonometry, square roots or tolerances is written
//! against [`Real`].

use std::fmt::{Debug, Display};
use std::ops::Neg;

use num_traits::{Float, FloatConst, FromPrimitive, Num};

/// A commutative ring with unit in which 2 is invertible.
pub trait Ring: Copy + Num + Neg<Output = Self> {
    fn two() -> Self {
        Self::one() + Self::one()
    }

    fn half() -> Self {
        Self::one() / Self::two()
    }
}

impl<T: Copy + Num + Neg<Output = T>> Ring for T {}

/// floating point: f32 or f64
pub trait Real:
    Ring + Float + FloatConst + FromPrimitive + Default + Debug + Display + Send + Sync + 'static
{
    /// Converts an `f64` literal into this type.
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("literal representable")
    }

    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("integer representable")
    }

    /// Tolerance used when validating rotation matrices: `1e-12`, or a few
    /// hundred ulps for types where that is below machine precision.
    fn rotation_tol() -> Self {
        Self::lit(1e-12).max(Self::epsilon() * Self::lit(256.0))
    }
}

impl Real for f32 {}
impl Real for f64 {}
