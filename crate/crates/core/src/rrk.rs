//! Rayleigh–Ritz in the Krylov space `span{Hʲ|φ⟩ : j < N}`.
//!
//! In that non-orthogonal basis the overlap and Hamiltonian matrices are the
//! Hankel matrices `B_ij = μ_{i+j}` and `A_ij = μ_{i+j+1}`, and the Ritz
//! values are the roots of `det(A - W B) = 0`. We factor `B = L Lᵀ`, take the
//! eigenvalues of `L⁻¹ A L⁻ᵀ`, and escalate the working precision until the
//! roots stop moving. A failing Cholesky pivot means the Krylov vectors are
//! linearly dependent at this order.

use num_rational::BigRational;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hp::HighPrecisionReal;
use crate::linalg::dense::{
    back_substitute_transposed, cholesky, congruence_inverse, eigenvector_for, matvec, norm,
    symmetric_eigenvalues, DenseLu, DenseMatrix,
};
use crate::scalar::{ten_pow_neg, Precision, Real};

/// Working precision starts at this multiple of the target digits...
pub const START_FACTOR: u32 = 4;
/// ...and doubles up to this multiple.
pub const CEILING_FACTOR: u32 = 64;

#[derive(Debug, Clone)]
pub struct RrkEstimate {
    pub order: usize,
    pub w0: HighPrecisionReal,
    /// Working digits of the accepted attempt.
    pub precision_used: u32,
    /// `‖A c - W₀ B c‖ / ‖B c‖` for the Ritz vector `c` of `W₀`.
    pub residual: HighPrecisionReal,
}

#[derive(Debug, Clone)]
pub struct RrkSpectrum {
    pub order: usize,
    /// Ascending Ritz values.
    pub roots: Vec<HighPrecisionReal>,
    pub precision_used: u32,
    pub residual: HighPrecisionReal,
}

enum Failure {
    Degenerate { rank: usize },
    NoConvergence,
}

struct Attempt {
    roots: Vec<HighPrecisionReal>,
    residual: HighPrecisionReal,
}

fn hankel(mu: &[BigRational], n: usize, shift: usize, prec: Precision) -> DenseMatrix<HighPrecisionReal> {
    let entries: Vec<HighPrecisionReal> = (0..2 * n - 1)
        .map(|k| HighPrecisionReal::from_rational_at(&mu[k + shift], prec))
        .collect();
    (0..n)
        .map(|i| (0..n).map(|j| entries[i + j].clone()).collect())
        .collect()
}

fn attempt(mu: &[BigRational], n: usize, prec: Precision) -> std::result::Result<Attempt, Failure> {
    let b = hankel(mu, n, 0, prec);
    let a = hankel(mu, n, 1, prec);
    let rel_tol = HighPrecisionReal::from_rational_at(&ten_pow_neg(prec.digits() / 2), prec);
    let l = cholesky(&b, &rel_tol).map_err(|e| Failure::Degenerate { rank: e.rank })?;
    let c = congruence_inverse(&l, &a);
    let roots = symmetric_eigenvalues(c.clone()).ok_or(Failure::NoConvergence)?;

    let w0 = roots[0].clone();
    let y = eigenvector_for(&c, &w0, 2);
    let ritz = back_substitute_transposed(&l, &y);
    let ac = matvec(&a, &ritz);
    let bc = matvec(&b, &ritz);
    let r: Vec<HighPrecisionReal> = ac
        .into_iter()
        .zip(&bc)
        .map(|(x, y)| x - w0.clone() * y.clone())
        .collect();
    let residual = norm(&r) / norm(&bc);
    Ok(Attempt { roots, residual })
}

fn max_shift(a: &[HighPrecisionReal], b: &[HighPrecisionReal]) -> HighPrecisionReal {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x.clone() - y.clone()).abs())
        .fold(HighPrecisionReal::from_f64_at(0.0, a[0].precision()), |m, d| m.max_of(d))
}

fn escalate(mu: &[BigRational], n: usize, target: u32, all_roots: bool) -> Result<(Attempt, u32)> {
    if n == 0 {
        return Err(Error::InvalidOrder(n));
    }
    if target == 0 {
        return Err(Error::InvalidOrder(0));
    }
    if mu.len() < 2 * n {
        return Err(Error::NotEnoughMoments {
            needed: 2 * n,
            have: mu.len(),
        });
    }
    if !num_traits::One::is_one(&mu[0]) {
        return Err(Error::UnnormalizedTrialState);
    }
    let ceiling = CEILING_FACTOR * target;
    let mut digits = START_FACTOR * target;
    let mut previous: Option<Attempt> = None;
    let mut last_failure: Option<Failure>;
    let tol = ten_pow_neg(target);
    loop {
        let prec = Precision(digits);
        match attempt(mu, n, prec) {
            Ok(current) => {
                let tol_hp = HighPrecisionReal::from_rational_at(&tol, prec);
                if let Some(prev) = &previous {
                    let shift = if all_roots {
                        max_shift(&prev.roots, &current.roots)
                    } else {
                        (prev.roots[0].clone() - current.roots[0].clone()).abs()
                    };
                    if shift < tol_hp && current.residual < tol_hp {
                        return Ok((current, digits));
                    }
                }
                previous = Some(current);
                last_failure = None;
            }
            Err(f) => {
                previous = None;
                last_failure = Some(f);
            }
        }
        if digits * 2 > ceiling {
            return Err(match last_failure {
                Some(Failure::Degenerate { rank }) => Error::KrylovDegeneracy {
                    order: n,
                    rank,
                    digits,
                },
                _ => Error::PrecisionExhausted { order: n, digits },
            });
        }
        digits *= 2;
    }
}

/// Smallest Ritz value `W₀` at Krylov dimension `n` from `μ_0 ..= μ_{2n-1}`.
pub fn rrk_ground(mu: &[BigRational], n: usize, target_digits: u32) -> Result<RrkEstimate> {
    let (a, digits) = escalate(mu, n, target_digits, false)?;
    Ok(RrkEstimate {
        order: n,
        w0: a.roots[0].clone(),
        precision_used: digits,
        residual: a.residual,
    })
}

/// All `n` Ritz values, ascending, each stable to `target_digits`.
pub fn rrk_spectrum(mu: &[BigRational], n: usize, target_digits: u32) -> Result<RrkSpectrum> {
    let (a, digits) = escalate(mu, n, target_digits, true)?;
    Ok(RrkSpectrum {
        order: n,
        roots: a.roots,
        precision_used: digits,
        residual: a.residual,
    })
}

pub fn rrk_all_roots(mu: &[BigRational], n: usize, target_digits: u32) -> Result<Vec<HighPrecisionReal>> {
    rrk_spectrum(mu, n, target_digits).map(|s| s.roots)
}

/// Orders `1 ..= n_max`, each with its own outcome.
pub fn rrk_sweep(mu: &[BigRational], n_max: usize, target_digits: u32) -> Vec<(usize, Result<RrkEstimate>)> {
    (1..=n_max)
        .into_par_iter()
        .map(|n| (n, rrk_ground(mu, n, target_digits)))
        .collect()
}

/// `det(A - W B)` at the precision of `w`.
pub fn secular_determinant(mu: &[BigRational], n: usize, w: &HighPrecisionReal) -> HighPrecisionReal {
    let prec = w.precision();
    let b = hankel(mu, n, 0, prec);
    let a = hankel(mu, n, 1, prec);
    let m: DenseMatrix<HighPrecisionReal> = a
        .into_iter()
        .zip(b)
        .map(|(ra, rb)| {
            ra.into_iter()
                .zip(rb)
                .map(|(x, y)| x - w.clone() * y)
                .collect()
        })
        .collect();
    DenseLu::factor(&m, &HighPrecisionReal::epsilon_at(prec)).determinant()
}
