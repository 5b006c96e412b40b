//! Closed intervals with conservative outward rounding.
//!
//! Every operation inflates each endpoint by one ulp after the f64 rounding,
//! instead of switching the hardware rounding mode. That costs at most two
//! ulps of sharpness per operation, which the adaptive bisection in the
//! certifier absorbs, and it behaves identically on every platform.

use crate::error::{Error, Result};
use crate::real::Real;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval<R: Real> {
    lo: R,
    hi: R,
}

impl<R: Real> Interval<R> {
    pub fn new(lo: R, hi: R) -> Result<Self> {
        if !(lo <= hi) {
            return Err(Error::IntervalUndefined(format!(
                "endpoints out of order or NaN: [{lo}, {hi}]"
            )));
        }
        Ok(Interval { lo, hi })
    }

    pub fn point(x: R) -> Self {
        Interval { lo: x, hi: x }
    }

    pub fn lo(&self) -> R {
        self.lo
    }

    pub fn hi(&self) -> R {
        self.hi
    }

    pub fn width(&self) -> R {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> R {
        R::half() * (self.lo + self.hi)
    }

    pub fn contains(&self, x: R) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_interval(&self, other: &Interval<R>) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    fn widened(lo: R, hi: R) -> Self {
        Interval {
            lo: lo.next_down(),
            hi: hi.next_up(),
        }
    }

    pub fn neg(self) -> Self {
        Interval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }

    pub fn add(self, other: Self) -> Self {
        Self::widened(self.lo + other.lo, self.hi + other.hi)
    }

    pub fn sub(self, other: Self) -> Self {
        Self::widened(self.lo - other.hi, self.hi - other.lo)
    }

    pub fn mul(self, other: Self) -> Self {
        let a = self.lo * other.lo;
        let b = self.lo * other.hi;
        let c = self.hi * other.lo;
        let d = self.hi * other.hi;
        Self::widened(a.min(b).min(c).min(d), a.max(b).max(c).max(d))
    }

    /// Division; the divisor must not contain zero.
    pub fn div(self, other: Self) -> Result<Self> {
        if other.lo <= R::zero() && other.hi >= R::zero() {
            return Err(Error::IntervalUndefined(format!(
                "division by interval containing zero: [{}, {}]",
                other.lo, other.hi
            )));
        }
        let a = self.lo / other.lo;
        let b = self.lo / other.hi;
        let c = self.hi / other.lo;
        let d = self.hi / other.hi;
        Ok(Self::widened(
            a.min(b).min(c).min(d),
            a.max(b).max(c).max(d),
        ))
    }

    /// Square root; the interval must be nonnegative.
    pub fn sqrt(self) -> Result<Self> {
        if self.lo < R::zero() {
            return Err(Error::IntervalUndefined(format!(
                "sqrt of interval with negative part: [{}, {}]",
                self.lo, self.hi
            )));
        }
        let lo = self.lo.sqrt().next_down().max(R::zero());
        Ok(Interval {
            lo,
            hi: self.hi.sqrt().next_up(),
        })
    }

    /// Elementwise minimum (outward widened).
    pub fn min_i(self, other: Self) -> Self {
        Self::widened(self.lo.min(other.lo), self.hi.min(other.hi))
    }

    /// Elementwise maximum (outward widened).
    pub fn max_i(self, other: Self) -> Self {
        Self::widened(self.lo.max(other.lo), self.hi.max(other.hi))
    }

    /// Tight square: sharper than `self.mul(self)` since both factors are
    /// the same variable.
    pub fn square(self) -> Self {
        if self.lo >= R::zero() {
            Self::widened(self.lo * self.lo, self.hi * self.hi)
        } else if self.hi <= R::zero() {
            Self::widened(self.hi * self.hi, self.lo * self.lo)
        } else {
            let m = (-self.lo).max(self.hi);
            Self::widened(R::zero(), m * m)
        }
    }

    pub fn split(self) -> (Self, Self) {
        let mid = self.midpoint();
        (
            Interval {
                lo: self.lo,
                hi: mid,
            },
            Interval {
                lo: mid,
                hi: self.hi,
            },
        )
    }
}

impl<R: Real> Add for Interval<R> {
    type Output = Interval<R>;
    fn add(self, rhs: Self) -> Self {
        Interval::add(self, rhs)
    }
}

impl<R: Real> Sub for Interval<R> {
    type Output = Interval<R>;
    fn sub(self, rhs: Self) -> Self {
        Interval::sub(self, rhs)
    }
}

impl<R: Real> Mul for Interval<R> {
    type Output = Interval<R>;
    fn mul(self, rhs: Self) -> Self {
        Interval::mul(self, rhs)
    }
}

impl<R: Real> Neg for Interval<R> {
    type Output = Interval<R>;
    fn neg(self) -> Self {
        Interval::neg(self)
    }
}
