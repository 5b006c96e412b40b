//! Scalar abstraction over the floating-point type.
//!
//! All numerical routines in this crate are generic over [`Real`], which is
//! `num_traits::Float` extended with ulp stepping (needed for outward-rounded
//! interval arithmetic) and a lossless-enough conversion from `f64` literals.

use num_traits::{Float, FromPrimitive};

/// Floating-point scalar: `f32` or `f64`.
pub trait Real:
    Float + FromPrimitive + core::fmt::Debug + core::fmt::Display + Send + Sync + 'static
{
    /// Converts an `f64` constant, rounding to nearest if narrower.
    fn of(x: f64) -> Self;

    /// Widens to `f64`.
    fn to_f64(self) -> f64;

    /// The smallest value strictly greater than `self` (finite inputs).
    fn next_up(self) -> Self;

    /// The largest value strictly less than `self` (finite inputs).
    fn next_down(self) -> Self;

    fn pi() -> Self {
        Self::of(core::f64::consts::PI)
    }

    fn two() -> Self {
        Self::of(2.0)
    }

    fn half() -> Self {
        Self::of(0.5)
    }
}

impl Real for f64 {
    fn of(x: f64) -> Self {
        x
    }

    fn to_f64(self) -> f64 {
        self
    }

    fn next_up(self) -> Self {
        if self.is_nan() || self == f64::INFINITY {
            return self;
        }
        let bits = self.to_bits();
        let abs = bits & 0x7fff_ffff_ffff_ffff;
        let next = if abs == 0 {
            1 // -0.0 and +0.0 both step to the minimum positive subnormal
        } else if bits == abs {
            bits + 1
        } else {
            bits - 1
        };
        f64::from_bits(next)
    }

    fn next_down(self) -> Self {
        -(-self).next_up()
    }
}

impl Real for f32 {
    fn of(x: f64) -> Self {
        x as f32
    }

    fn to_f64(self) -> f64 {
        self as f64
    }

    fn next_up(self) -> Self {
        if self.is_nan() || self == f32::INFINITY {
            return self;
        }
        let bits = self.to_bits();
        let abs = bits & 0x7fff_ffff;
        let next = if abs == 0 {
            1
        } else if bits == abs {
            bits + 1
        } else {
            bits - 1
        };
        f32::from_bits(next)
    }

    fn next_down(self) -> Self {
        -(-self).next_up()
    }
}
