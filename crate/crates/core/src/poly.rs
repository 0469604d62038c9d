//! Sparse polynomials in the three model parameters with rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::params::ModelParams;
use crate::scalar::ExactRing;

/// The indeterminates, in exponent-vector order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symbol {
    Omega0 = 0,
    Omega = 1,
    G = 2,
}

/// Exponents of (ω₀, ω, g).
pub type Monomial = [u32; 3];

#[derive(Clone, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, BigRational>,
}

impl Poly {
    pub fn constant(c: BigRational) -> Self {
        let mut p = Poly::default();
        p.push(Monomial::default(), c);
        p
    }

    pub fn var(s: Symbol) -> Self {
        let mut exps = [0; 3];
        exps[s as usize] = 1;
        Poly::monomial(BigRational::one(), exps)
    }

    pub fn monomial(coeff: BigRational, exps: Monomial) -> Self {
        let mut p = Poly::default();
        p.push(exps, coeff);
        p
    }

    fn push(&mut self, exps: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(exps).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&exps);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exps: Monomial) -> BigRational {
        self.terms.get(&exps).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Poly::one(), |acc, _| acc * self.clone())
    }

    /// Largest total degree among the terms; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degrees = self.terms.keys().map(|e| e.iter().sum::<u32>());
        match degrees.next() {
            None => true,
            Some(d) => degrees.all(|x| x == d),
        }
    }

    /// True when `s` only appears with even exponents.
    pub fn is_even_in(&self, s: Symbol) -> bool {
        self.terms.keys().all(|e| e[s as usize] % 2 == 0)
    }

    pub fn eval(&self, params: &ModelParams) -> BigRational {
        let values = [params.omega0(), params.omega(), params.g()];
        self.terms
            .iter()
            .map(|(exps, c)| {
                exps.iter()
                    .zip(values.iter())
                    .fold(c.clone(), |acc, (&k, v)| acc * num_traits::pow((*v).clone(), k as usize))
            })
            .fold(BigRational::zero(), |a, b| a + b)
    }
}

impl Zero for Poly {
    fn zero() -> Self {
        Poly::default()
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for Poly {
    fn one() -> Self {
        Poly::constant(BigRational::one())
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(mut self, rhs: Poly) -> Poly {
        for (e, c) in rhs.terms {
            self.push(e, c);
        }
        self
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.into_iter().map(|(e, c)| (e, -c)).collect(),
        }
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        self + (-rhs)
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        let mut out = Poly::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]];
                out.push(e, ca * cb);
            }
        }
        out
    }
}

impl ExactRing for Poly {
    fn from_rational(q: &BigRational) -> Self {
        Poly::constant(q.clone())
    }
}

impl From<i64> for Poly {
    fn from(k: i64) -> Self {
        Poly::constant(BigRational::from_integer(BigInt::from(k)))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        const NAMES: [&str; 3] = ["w0", "w", "g"];
        // Highest degree first reads more naturally.
        for (i, (exps, c)) in self.terms.iter().rev().enumerate() {
            let sign = if c.is_negative() { "-" } else { "+" };
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let a = c.abs();
            let vars: Vec<String> = exps
                .iter()
                .zip(NAMES)
                .filter(|(k, _)| **k > 0)
                .map(|(k, n)| if *k == 1 { n.to_string() } else { format!("{n}^{k}") })
                .collect();
            if vars.is_empty() || !a.is_one() {
                write!(f, "{a}")?;
                if !vars.is_empty() {
                    write!(f, "*")?;
                }
            }
            write!(f, "{}", vars.join("*"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn arithmetic_and_cancellation() {
        let g = Poly::var(Symbol::G);
        let w = Poly::var(Symbol::Omega);
        let sq = (g.clone() + w.clone()) * (g.clone() - w.clone());
        assert_eq!(sq, g.pow(2) - w.pow(2));
        assert!((sq.clone() - sq).is_zero());
    }

    #[test]
    fn evaluation() {
        let p = Poly::var(Symbol::Omega0).scale(&r(-1, 2)) + Poly::var(Symbol::G).pow(2).scale(&r(4, 1));
        let params = ModelParams::new(r(1, 1), r(1, 1), r(3, 1)).unwrap();
        assert_eq!(p.eval(&params), r(71, 2));
        assert_eq!(p.total_degree(), Some(2));
        assert!(!p.is_homogeneous());
        assert!(p.is_even_in(Symbol::G));
    }

    #[test]
    fn display_is_readable() {
        let p = Poly::var(Symbol::G).pow(2).scale(&r(4, 1)) - Poly::var(Symbol::Omega0).scale(&r(1, 2));
        assert_eq!(p.to_string(), "-1/2*w0 + 4*g^2");
    }
}
