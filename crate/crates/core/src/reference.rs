//! Benchmark ground-state energies from the truncated Hamiltonian.
//!
//! The even-parity rows of H form a tridiagonal chain
//! `(↓,0) - (↑,1) - (↓,2) - (↑,3) - …`, so a Sturm-count bisection in `f64`
//! brackets the lowest even eigenvalue cheaply. That estimate seeds shifted
//! inverse iteration on the full banded matrix at high precision, which
//! switches to Rayleigh-quotient shifts once the vector has settled. Every
//! iterate is projected onto the even sector: at strong coupling the odd
//! partner of the ground state lies closer than the working epsilon.

use num_rational::BigRational;
use num_traits::Zero;

use crate::band::BandSparseMatrix;
use crate::basis::{is_even_position, symmetric_hamiltonian};
use crate::error::{Error, Result};
use crate::hp::HighPrecisionReal;
use crate::linalg::BandLu;
use crate::params::ModelParams;
use crate::scalar::{ten_pow_neg, Precision, Real};

/// Extra working digits on top of the target.
pub const GUARD_DIGITS: u32 = 15;
/// Basis increment used to verify the digits.
pub const VERIFY_STEP: usize = 500;
pub const MAX_ITERATIONS: usize = 200;

#[derive(Debug, Clone)]
pub struct ReferenceEnergy {
    pub params: ModelParams,
    pub basis_size: usize,
    /// Significant digits shared with the run at `basis_size + 500`.
    pub digits: u32,
    pub value: HighPrecisionReal,
    /// `‖H v - E v‖ / ‖v‖` at the working precision.
    pub residual: HighPrecisionReal,
}

/// Output of one eigen solve.
#[derive(Debug, Clone)]
pub struct EigenSolve {
    pub value: HighPrecisionReal,
    pub vector: Vec<HighPrecisionReal>,
    pub residual: HighPrecisionReal,
    pub iterations: usize,
}

fn even_chain(h: &BandSparseMatrix<f64>) -> (Vec<f64>, Vec<f64>) {
    let idx: Vec<usize> = (0..h.dim()).filter(|&i| is_even_position(i)).collect();
    let diag = idx.iter().map(|&i| h.get(i, i)).collect();
    let off = idx.windows(2).map(|w| h.get(w[0], w[1])).collect();
    (diag, off)
}

/// Number of eigenvalues below `x` of the tridiagonal `(diag, off)`.
fn sturm_count(diag: &[f64], off: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0;
    for (i, &a) in diag.iter().enumerate() {
        let coupling = if i == 0 { 0.0 } else { off[i - 1] * off[i - 1] / q };
        q = a - x - coupling;
        if q == 0.0 {
            q = -f64::EPSILON * (a.abs() + x.abs() + 1.0);
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Lowest even-sector eigenvalue to roughly `f64` accuracy.
pub fn even_sector_estimate(params: &ModelParams, n: usize) -> Result<f64> {
    let h: BandSparseMatrix<f64> = symmetric_hamiltonian(params, n, Precision(17))?;
    let (diag, off) = even_chain(&h);
    let radius = |i: usize| {
        let left = if i > 0 { off[i - 1].abs() } else { 0.0 };
        let right = off.get(i).map_or(0.0, |v| v.abs());
        left + right
    };
    let mut lo = (0..diag.len()).map(|i| diag[i] - radius(i)).fold(f64::INFINITY, f64::min);
    let mut hi = (0..diag.len()).map(|i| diag[i] + radius(i)).fold(f64::NEG_INFINITY, f64::max);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if sturm_count(&diag, &off, mid) >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 4.0 * f64::EPSILON * hi.abs().max(1.0) {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn dot(a: &[HighPrecisionReal], b: &[HighPrecisionReal]) -> HighPrecisionReal {
    a.iter()
        .zip(b)
        .fold(a[0].lift_int(0), |s, (x, y)| s + x.clone() * y.clone())
}

fn project_and_normalize(v: &mut [HighPrecisionReal]) {
    for (i, x) in v.iter_mut().enumerate() {
        if !is_even_position(i) {
            *x = x.lift_int(0);
        }
    }
    let norm = dot(v, v).sqrt();
    for x in v.iter_mut() {
        *x = x.clone() / norm.clone();
    }
}

/// Lowest even-parity eigenpair of `h` (symmetric, at working precision),
/// starting from the shift `seed`. Stops once the Rayleigh quotient changes
/// by less than `tol` and the residual is below `residual_tol`.
pub fn lowest_even_eigenpair(
    h: &BandSparseMatrix<HighPrecisionReal>,
    seed: &HighPrecisionReal,
    tol: &HighPrecisionReal,
    residual_tol: &HighPrecisionReal,
) -> Result<EigenSolve> {
    let n = h.dim();
    let prec = seed.precision();
    let tiny = HighPrecisionReal::epsilon_at(prec) * HighPrecisionReal::epsilon_at(prec);
    let mut v: Vec<HighPrecisionReal> = (0..n).map(|_| seed.lift_int(0)).collect();
    v[0] = seed.lift_int(1);
    if n > 3 {
        v[3] = seed.lift(&ten_pow_neg(3));
    }
    project_and_normalize(&mut v);

    // A fixed shift first: the seed is close to the eigenvalue but e₁ is far
    // from the eigenvector, so Rayleigh updates would wander.
    let settle = seed.lift(&ten_pow_neg(8)) * (seed.abs().max_of(seed.lift_int(1)));
    let mut shift = seed.clone();
    let mut fixed = true;
    let mut lu = BandLu::factor(h, &shift, &tiny);
    let mut previous: Option<HighPrecisionReal> = None;
    for iteration in 1..=MAX_ITERATIONS {
        let mut w = lu.solve(&v);
        project_and_normalize(&mut w);
        v = w;
        let hv = h.matvec(&v);
        let rho = dot(&v, &hv);
        let residual = hv
            .iter()
            .zip(&v)
            .map(|(a, b)| {
                let r = a.clone() - rho.clone() * b.clone();
                r.clone() * r
            })
            .fold(rho.lift_int(0), |s, x| s + x)
            .sqrt();
        if fixed {
            if (rho.clone() - seed.clone()).abs() < settle {
                fixed = false;
            }
        } else if let Some(p) = &previous {
            if (rho.clone() - p.clone()).abs() < *tol && residual < *residual_tol {
                return Ok(EigenSolve {
                    value: rho,
                    vector: v,
                    residual,
                    iterations: iteration,
                });
            }
        }
        if !fixed {
            if residual.is_zero() {
                return Ok(EigenSolve {
                    value: rho,
                    vector: v,
                    residual,
                    iterations: iteration,
                });
            }
            previous = Some(rho.clone());
            shift = rho;
            lu = BandLu::factor(h, &shift, &tiny);
        }
    }
    Err(Error::NoConvergence {
        iterations: MAX_ITERATIONS,
    })
}

/// Lowest eigenvalue of the `n`-state truncation at `target_digits + 15`
/// working digits, with no cross-check.
pub fn truncated_ground_energy(params: &ModelParams, n: usize, target_digits: u32) -> Result<EigenSolve> {
    let prec = Precision(target_digits + GUARD_DIGITS);
    if params.is_decoupled() {
        let value = HighPrecisionReal::from_rational_at(&(-params.omega0() / BigRational::from_integer(2.into())), prec);
        let mut vector: Vec<HighPrecisionReal> = (0..n).map(|_| value.lift_int(0)).collect();
        vector[0] = value.lift_int(1);
        return Ok(EigenSolve {
            residual: value.lift_int(0),
            value,
            vector,
            iterations: 0,
        });
    }
    let h: BandSparseMatrix<HighPrecisionReal> = symmetric_hamiltonian(params, n, prec)?;
    let seed = HighPrecisionReal::from_f64_at(even_sector_estimate(params, n)?, prec);
    let tol = HighPrecisionReal::from_rational_at(&ten_pow_neg(target_digits + 5), prec);
    let residual_tol = HighPrecisionReal::from_rational_at(&ten_pow_neg(target_digits), prec);
    lowest_even_eigenpair(&h, &seed, &tol, &residual_tol)
}

/// Significant digits on which `a` and `b` agree, capped at `cap`.
pub fn matching_digits(a: &HighPrecisionReal, b: &HighPrecisionReal, cap: u32) -> u32 {
    let diff = (a.clone() - b.clone()).abs();
    if diff.is_zero() {
        return cap;
    }
    let scale = if a.is_zero() { a.lift_int(1) } else { a.abs() };
    let rel = (diff / scale).log10().to_f64();
    if rel >= 0.0 {
        0
    } else {
        ((-rel).floor() as u32).min(cap)
    }
}

/// Ground-state energy of the `n`-state truncation, verified at `n + 500`.
pub fn ground_energy(params: &ModelParams, n: usize, target_digits: u32) -> Result<ReferenceEnergy> {
    if n < 100 || n % 2 == 1 {
        return Err(Error::InvalidTruncation(n));
    }
    if target_digits < 10 {
        return Err(Error::InvalidParams(format!(
            "target digits must be at least 10, got {target_digits}"
        )));
    }
    let (main, check) = rayon::join(
        || truncated_ground_energy(params, n, target_digits),
        || truncated_ground_energy(params, n + VERIFY_STEP, target_digits),
    );
    let (main, check) = (main?, check?);
    Ok(ReferenceEnergy {
        params: params.clone(),
        basis_size: n,
        digits: matching_digits(&main.value, &check.value, target_digits),
        value: main.value,
        residual: main.residual,
    })
}

impl ReferenceEnergy {
    /// Exact binary value of the estimate.
    pub fn value_rational(&self) -> BigRational {
        self.value.to_rational()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::dense::symmetric_eigenvalues;

    #[test]
    fn sturm_count_matches_dense_spectrum() {
        let p = ModelParams::from_ints(1, 1, 2).unwrap();
        let h: BandSparseMatrix<f64> = symmetric_hamiltonian(&p, 40, Precision(17)).unwrap();
        let (d, o) = even_chain(&h);
        let n = d.len();
        let mut t = vec![vec![0.0; n]; n];
        for i in 0..n {
            t[i][i] = d[i];
            if i + 1 < n {
                t[i][i + 1] = o[i];
                t[i + 1][i] = o[i];
            }
        }
        let eig = symmetric_eigenvalues(t).unwrap();
        for x in [-20.0, -5.0, 0.0, 3.5, 10.0] {
            assert_eq!(sturm_count(&d, &o, x), eig.iter().filter(|&&e| e < x).count());
        }
    }

    #[test]
    fn even_chain_is_tridiagonal() {
        let p = ModelParams::from_ints(2, 1, 3).unwrap();
        let h: BandSparseMatrix<f64> = symmetric_hamiltonian(&p, 30, Precision(17)).unwrap();
        let idx: Vec<usize> = (0..30).filter(|&i| is_even_position(i)).collect();
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                if a.abs_diff(b) > 1 {
                    assert_eq!(h.get(i, j), 0.0);
                }
            }
        }
    }

    #[test]
    fn small_truncation_against_dense_even_block() {
        // Independent route: Householder + QL on the dense even block at 40 digits.
        let p = ModelParams::from_ints(1, 1, 1).unwrap();
        let prec = Precision(40);
        let h: BandSparseMatrix<HighPrecisionReal> = symmetric_hamiltonian(&p, 60, prec).unwrap();
        let idx: Vec<usize> = (0..60).filter(|&i| is_even_position(i)).collect();
        let block: Vec<Vec<HighPrecisionReal>> =
            idx.iter().map(|&i| idx.iter().map(|&j| h.get(i, j)).collect()).collect();
        let dense = symmetric_eigenvalues(block).unwrap()[0].clone();

        let got = truncated_ground_energy(&p, 60, 25).unwrap();
        assert!(matching_digits(&got.value, &dense, 30) >= 25, "{} vs {}", got.value, dense);
        for (i, x) in got.vector.iter().enumerate() {
            if !is_even_position(i) {
                assert!(x.is_zero());
            }
        }
    }

    #[test]
    fn decoupled_limit_is_exact() {
        let e = ground_energy(&ModelParams::from_ints(1, 1, 0).unwrap(), 100, 20).unwrap();
        assert_eq!(e.value_rational(), BigRational::new((-1).into(), 2.into()));
        assert_eq!(e.digits, 20);
    }

    #[test]
    fn preconditions() {
        let p = ModelParams::from_ints(1, 1, 1).unwrap();
        assert_eq!(ground_energy(&p, 99, 20).unwrap_err(), Error::InvalidTruncation(99));
        assert_eq!(ground_energy(&p, 64, 20).unwrap_err(), Error::InvalidTruncation(64));
        assert!(matches!(ground_energy(&p, 100, 5), Err(Error::InvalidParams(_))));
    }

    #[test]
    fn weak_coupling_verifies_all_digits() {
        let p = ModelParams::from_ints(1, 1, 1).unwrap();
        let e = ground_energy(&p, 100, 30).unwrap();
        assert_eq!(e.digits, 30);
        assert!(e.residual < HighPrecisionReal::from_rational_at(&ten_pow_neg(30), Precision(45)));
    }

    #[test]
    fn matching_digit_count() {
        let prec = Precision(30);
        let a = HighPrecisionReal::from_rational_at(&BigRational::new(123456.into(), 1000.into()), prec);
        let b = HighPrecisionReal::from_rational_at(&BigRational::new(123457.into(), 1000.into()), prec);
        assert_eq!(matching_digits(&a, &b, 20), 5);
        assert_eq!(matching_digits(&a, &a, 20), 20);
    }
}
