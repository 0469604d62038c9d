//! Scalar abstractions shared by every matrix and solver in the crate.
//!
//! Three kinds of scalar appear: exact rings (rationals and polynomials in
//! the model parameters), which only need ring arithmetic and a way to embed
//! rational constants, and real fields (`f64`, [`HighPrecisionReal`]), which
//! also order, take square roots and carry a working precision.
//!
//! [`HighPrecisionReal`]: crate::HighPrecisionReal

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Commutative ring with unity.
pub trait Ring:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
}

impl<T> Ring for T where
    T: Clone
        + Debug
        + PartialEq
        + Zero
        + One
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Neg<Output = T>
        + Send
        + Sync
{
}

pub trait Field: Ring + Div<Output = Self> {}

impl<T> Field for T where T: Ring + Div<Output = T> {}

/// A ring with an exact embedding of the rationals.
pub trait ExactRing: Ring {
    fn from_rational(q: &BigRational) -> Self;
}

impl ExactRing for BigRational {
    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }
}

/// Working precision in decimal digits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Precision(pub u32);

impl Precision {
    pub const fn digits(self) -> u32 {
        self.0
    }

    /// Mantissa bits needed to hold `digits` decimal digits, plus a small guard.
    pub fn bits(self) -> u32 {
        (f64::from(self.0) * std::f64::consts::LOG2_10).ceil() as u32 + 8
    }

    pub fn from_bits(bits: u32) -> Self {
        Precision(((f64::from(bits.saturating_sub(8))) / std::f64::consts::LOG2_10).floor() as u32)
    }
}

/// Ordered field with square roots, used by the floating-point solvers.
pub trait Real: Field + PartialOrd {
    /// Round an exact rational to this type at the given precision.
    fn from_rational_at(q: &BigRational, prec: Precision) -> Self;

    fn from_f64_at(x: f64, prec: Precision) -> Self;

    fn precision(&self) -> Precision;

    fn abs(&self) -> Self;

    fn sqrt(&self) -> Self;

    fn to_f64(&self) -> f64;

    /// The exact binary value as a rational.
    fn to_rational(&self) -> BigRational;

    /// Unit roundoff at `prec`.
    fn epsilon_at(prec: Precision) -> Self;

    /// A constant at the precision of `self`.
    fn lift(&self, q: &BigRational) -> Self {
        Self::from_rational_at(q, self.precision())
    }

    fn lift_int(&self, k: i64) -> Self {
        self.lift(&BigRational::from_integer(BigInt::from(k)))
    }

    fn max_of(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }
}

impl Real for f64 {
    fn from_rational_at(q: &BigRational, _prec: Precision) -> Self {
        q.to_f64().unwrap_or_else(|| {
            if q.is_negative() {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            }
        })
    }

    fn from_f64_at(x: f64, _prec: Precision) -> Self {
        x
    }

    fn precision(&self) -> Precision {
        Precision(15)
    }

    fn abs(&self) -> Self {
        f64::abs(*self)
    }

    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn to_rational(&self) -> BigRational {
        BigRational::from_float(*self).unwrap_or_else(BigRational::zero)
    }

    fn epsilon_at(_prec: Precision) -> Self {
        f64::EPSILON
    }
}

/// `10^(-digits)` as an exact rational.
pub fn ten_pow_neg(digits: u32) -> BigRational {
    BigRational::new(BigInt::one(), num_traits::pow(BigInt::from(10), digits as usize))
}
