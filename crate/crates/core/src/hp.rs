//! Arbitrary-precision real numbers backed by MPFR.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rug::integer::Order;
use rug::{Float, Integer};

use crate::scalar::{Precision, Real};

/// Precision given to values created without context (`zero()`, `one()`).
/// Binary operations take the larger precision of their operands, so these
/// constants adopt whatever precision they are combined with.
const CONTEXT_FREE_BITS: u32 = 64;

/// A binary floating-point number with a per-value working precision.
#[derive(Clone, PartialEq, PartialOrd)]
pub struct HighPrecisionReal(Float);

impl HighPrecisionReal {
    pub fn with_bits(bits: u32, value: f64) -> Self {
        HighPrecisionReal(Float::with_val(bits, value))
    }

    pub fn from_float(value: Float) -> Self {
        HighPrecisionReal(value)
    }

    pub fn as_float(&self) -> &Float {
        &self.0
    }

    pub fn bits(&self) -> u32 {
        self.0.prec()
    }

    /// Working precision in decimal digits.
    pub fn digits(&self) -> u32 {
        Precision::from_bits(self.bits()).digits()
    }

    /// Same value re-rounded to `prec`.
    pub fn with_precision(&self, prec: Precision) -> Self {
        HighPrecisionReal(Float::with_val(prec.bits(), &self.0))
    }

    pub fn log10(&self) -> Self {
        HighPrecisionReal(self.0.clone().log10())
    }

    pub fn is_finite(&self) -> bool {
        self.0.is_finite()
    }

    pub fn signum_i32(&self) -> i32 {
        match self.0.cmp0() {
            Some(Ordering::Less) => -1,
            Some(Ordering::Greater) => 1,
            _ => 0,
        }
    }
}

pub(crate) fn bigint_to_integer(x: &BigInt) -> Integer {
    let (sign, digits) = x.to_u32_digits();
    let magnitude = Integer::from_digits(&digits, Order::Lsf);
    match sign {
        Sign::Minus => -magnitude,
        _ => magnitude,
    }
}

pub(crate) fn integer_to_bigint(x: &Integer) -> BigInt {
    let digits = x.to_digits::<u32>(Order::Lsf);
    let sign = match x.cmp0() {
        Ordering::Less => Sign::Minus,
        Ordering::Equal => Sign::NoSign,
        Ordering::Greater => Sign::Plus,
    };
    BigInt::from_slice(sign, &digits)
}

fn rational_to_rug(q: &BigRational) -> rug::Rational {
    rug::Rational::from((bigint_to_integer(q.numer()), bigint_to_integer(q.denom())))
}

fn binary(a: &Float, b: &Float, op: impl FnOnce(&Float, &Float, u32) -> Float) -> HighPrecisionReal {
    HighPrecisionReal(op(a, b, a.prec().max(b.prec())))
}

impl Add for HighPrecisionReal {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        binary(&self.0, &rhs.0, |a, b, p| Float::with_val(p, a + b))
    }
}

impl Sub for HighPrecisionReal {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        binary(&self.0, &rhs.0, |a, b, p| Float::with_val(p, a - b))
    }
}

impl Mul for HighPrecisionReal {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        binary(&self.0, &rhs.0, |a, b, p| Float::with_val(p, a * b))
    }
}

impl Div for HighPrecisionReal {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        binary(&self.0, &rhs.0, |a, b, p| Float::with_val(p, a / b))
    }
}

impl Neg for HighPrecisionReal {
    type Output = Self;
    fn neg(self) -> Self {
        HighPrecisionReal(-self.0)
    }
}

impl Zero for HighPrecisionReal {
    fn zero() -> Self {
        HighPrecisionReal(Float::new(CONTEXT_FREE_BITS))
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl One for HighPrecisionReal {
    fn one() -> Self {
        HighPrecisionReal(Float::with_val(CONTEXT_FREE_BITS, 1))
    }
}

impl Real for HighPrecisionReal {
    fn from_rational_at(q: &BigRational, prec: Precision) -> Self {
        HighPrecisionReal(Float::with_val(prec.bits(), rational_to_rug(q)))
    }

    fn from_f64_at(x: f64, prec: Precision) -> Self {
        HighPrecisionReal(Float::with_val(prec.bits(), x))
    }

    fn precision(&self) -> Precision {
        Precision::from_bits(self.bits())
    }

    fn abs(&self) -> Self {
        HighPrecisionReal(self.0.clone().abs())
    }

    fn sqrt(&self) -> Self {
        HighPrecisionReal(self.0.clone().sqrt())
    }

    fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    fn to_rational(&self) -> BigRational {
        match self.0.to_integer_exp() {
            None => BigRational::zero(),
            Some((mantissa, exp)) => {
                let m = integer_to_bigint(&mantissa);
                if exp >= 0 {
                    BigRational::from_integer(m << exp as usize)
                } else {
                    BigRational::new(m, BigInt::one() << (-exp) as usize)
                }
            }
        }
    }

    fn epsilon_at(prec: Precision) -> Self {
        let bits = prec.bits();
        let mut eps = Float::with_val(bits, 1);
        eps >>= bits - 1;
        HighPrecisionReal(eps)
    }

    fn lift(&self, q: &BigRational) -> Self {
        HighPrecisionReal(Float::with_val(self.bits(), rational_to_rug(q)))
    }
}

impl fmt::Debug for HighPrecisionReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.to_string_radix(10, Some(self.digits().max(2) as usize)))
    }
}

impl fmt::Display for HighPrecisionReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}
