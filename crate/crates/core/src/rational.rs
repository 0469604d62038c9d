//! Exact rational parsing and decimal rendering.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

fn pow10(k: u32) -> BigInt {
    num_traits::pow(BigInt::from(10), k as usize)
}

/// Parse `"p/q"`, an integer, or a decimal literal (`"-2.5"`, `"1e-3"`)
/// into an exact rational. Decimals are converted exactly, never through
/// binary floating point.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let s = text.trim();
    let bad = || Error::Parse(format!("not a rational number: {text:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {text:?}")));
        }
        return Ok(BigRational::new(p, q));
    }

    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let e: i64 = s[pos + 1..].parse().map_err(|_| bad())?;
            (&s[..pos], e)
        }
        None => (s, 0),
    };
    let (negative, unsigned) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = unsigned.split_once('.').unwrap_or((unsigned, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let mut value = BigRational::from_integer(digits.parse::<BigInt>().map_err(|_| bad())?);
    let scale = exponent - frac_part.len() as i64;
    if scale.unsigned_abs() > 100_000 {
        return Err(bad());
    }
    let factor = BigRational::from_integer(pow10(scale.unsigned_abs() as u32));
    if scale >= 0 {
        value *= factor;
    } else {
        value /= factor;
    }
    Ok(if negative { -value } else { value })
}

/// Render as `"p/q"`, or `"p"` for integers.
pub fn to_fraction_string(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Round a non-negative rational to the nearest integer, ties to even.
fn round_half_even(q: &BigRational) -> BigInt {
    let (quot, rem) = q.numer().div_rem(q.denom());
    let twice = rem * 2u32;
    match twice.cmp(q.denom()) {
        std::cmp::Ordering::Less => quot,
        std::cmp::Ordering::Greater => quot + 1u32,
        std::cmp::Ordering::Equal => {
            if quot.is_even() {
                quot
            } else {
                quot + 1u32
            }
        }
    }
}

/// floor(log10 |q|) for nonzero q.
fn decimal_exponent(q: &BigRational) -> i64 {
    let a = q.abs();
    let num_len = a.numer().to_string().len() as i64;
    let den_len = a.denom().to_string().len() as i64;
    let mut e = num_len - den_len;
    // a in [10^(e-1), 10^(e+1)); pin it down.
    let ten = BigRational::from_integer(BigInt::from(10));
    let scaled = |e: i64| -> BigRational {
        if e >= 0 {
            a.clone() / BigRational::from_integer(pow10(e as u32))
        } else {
            a.clone() * BigRational::from_integer(pow10((-e) as u32))
        }
    };
    loop {
        let s = scaled(e);
        if s < BigRational::one() {
            e -= 1;
        } else if s >= ten {
            e += 1;
        } else {
            return e;
        }
    }
}

/// Scientific notation with `sig` significant digits, e.g. `-1.2500e-3`.
pub fn to_scientific(q: &BigRational, sig: u32) -> String {
    let sig = sig.max(1);
    if q.is_zero() {
        return format!("0.{}e0", "0".repeat(sig as usize - 1));
    }
    let a = q.abs();
    let mut e = decimal_exponent(&a);
    let mut digits = loop {
        let shift = sig as i64 - 1 - e;
        let scaled = if shift >= 0 {
            a.clone() * BigRational::from_integer(pow10(shift as u32))
        } else {
            a.clone() / BigRational::from_integer(pow10((-shift) as u32))
        };
        let m = round_half_even(&scaled);
        if m >= pow10(sig) {
            e += 1;
            continue;
        }
        break m.to_string();
    };
    let mut out = String::new();
    if q.is_negative() {
        out.push('-');
    }
    let rest = digits.split_off(1);
    out.push_str(&digits);
    if !rest.is_empty() {
        out.push('.');
        out.push_str(&rest);
    }
    out.push_str(&format!("e{e}"));
    out
}

/// Fixed-point notation with exactly `decimals` digits after the point.
pub fn to_fixed(q: &BigRational, decimals: u32) -> String {
    let scaled = q.abs() * BigRational::from_integer(pow10(decimals));
    let m = round_half_even(&scaled).to_string();
    let width = decimals as usize + 1;
    let padded = if m.len() < width {
        format!("{}{}", "0".repeat(width - m.len()), m)
    } else {
        m
    };
    let (int_part, frac_part) = padded.split_at(padded.len() - decimals as usize);
    let sign = if q.is_negative() && padded.chars().any(|c| c != '0') {
        "-"
    } else {
        ""
    };
    if decimals == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac_part}")
    }
}
