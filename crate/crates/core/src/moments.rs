//! Exact Hamiltonian moments `μ_j = ⟨φ|Hʲ|φ⟩` in the trial state
//! `|φ⟩ = |↓⟩⊗|0⟩` and the connected moments derived from them.
//!
//! Each power of H changes the boson number by at most one, so `Hʲ e₁`
//! lives in the first `2j + 2` basis states and any truncation `N ≥ 2j + 2`
//! reproduces `μ_j` exactly. The scaled (rational) representation gives the
//! same `(Hʲ)₁₁` as the symmetric one without any square roots.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::band::BandSparseMatrix;
use crate::basis::{scaled_hamiltonian, symbolic_hamiltonian, trial_vector};
use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::poly::Poly;
use crate::scalar::{ExactRing, Ring};

/// Smallest truncation that leaves `μ_j` untouched.
pub const fn minimal_basis(order: usize) -> usize {
    2 * order + 2
}

/// Truncation used by [`krylov_moments`].
pub const fn default_basis(order: usize) -> usize {
    2 * order + 4
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentTable {
    mu: Vec<BigRational>,
    connected: Vec<BigRational>,
    basis_size: usize,
}

impl MomentTable {
    pub fn max_order(&self) -> usize {
        self.mu.len() - 1
    }

    /// `μ_0 ..= μ_J`.
    pub fn mu(&self) -> &[BigRational] {
        &self.mu
    }

    /// `I_1 ..= I_J`; element `k` is `I_{k+1}`.
    pub fn connected(&self) -> &[BigRational] {
        &self.connected
    }

    /// `I_j` with the one-based index used throughout the literature.
    pub fn connected_at(&self, j: usize) -> &BigRational {
        &self.connected[j - 1]
    }

    pub fn basis_size_used(&self) -> usize {
        self.basis_size
    }
}

/// The Krylov vectors `Hʲ e₁` for `j = 0 ..= order`.
pub fn krylov_vectors<S: Ring>(h: &BandSparseMatrix<S>, order: usize) -> Vec<Vec<S>> {
    let mut out = Vec::with_capacity(order + 1);
    let mut w = trial_vector::<S>(h.dim());
    for _ in 0..order {
        let next = h.matvec(&w);
        out.push(w);
        w = next;
    }
    out.push(w);
    out
}

/// `(Hʲ)₁₁` for `j = 0 ..= order`.
pub fn moment_sequence<S: Ring>(h: &BandSparseMatrix<S>, order: usize) -> Vec<S> {
    let mut mu = Vec::with_capacity(order + 1);
    let mut w = trial_vector::<S>(h.dim());
    for j in 0..=order {
        mu.push(w[0].clone());
        if j < order {
            w = h.matvec(&w);
        }
    }
    mu
}

/// Connected moments `I_1 ..= I_J` from `μ_0 ..= μ_J` through
/// `I_{j+1} = μ_{j+1} - Σ_{i<j} C(j, i) I_{i+1} μ_{j-i}`.
pub fn connected_moments<S: ExactRing>(mu: &[S]) -> Result<Vec<S>> {
    match mu.first() {
        Some(m0) if m0.is_one() => {}
        _ => return Err(Error::UnnormalizedTrialState),
    }
    let order = mu.len() - 1;
    let mut connected: Vec<S> = Vec::with_capacity(order);
    // Pascal row j, updated in place.
    let mut binom: Vec<BigInt> = vec![BigInt::one()];
    for j in 0..order {
        let mut value = mu[j + 1].clone();
        for i in 0..j {
            let c = S::from_rational(&BigRational::from_integer(binom[i].clone()));
            value = value - c * connected[i].clone() * mu[j - i].clone();
        }
        connected.push(value);
        let mut next = vec![BigInt::one(); j + 2];
        for i in 1..=j {
            next[i] = &binom[i - 1] + &binom[i];
        }
        binom = next;
    }
    Ok(connected)
}

/// Exact moments and connected moments to order `order` with truncation `basis`.
pub fn krylov_moments_with_basis(params: &ModelParams, order: usize, basis: usize) -> Result<MomentTable> {
    if order == 0 {
        return Err(Error::InvalidOrder(order));
    }
    if basis < minimal_basis(order) {
        return Err(Error::InsufficientBasis {
            order,
            needed: minimal_basis(order),
            got: basis,
        });
    }
    let h: BandSparseMatrix<BigRational> = scaled_hamiltonian(params, basis)?;
    let mu = moment_sequence(&h, order);
    let connected = connected_moments(&mu)?;
    Ok(MomentTable {
        mu,
        connected,
        basis_size: basis,
    })
}

/// Exact moments `μ_0 ..= μ_J` and `I_1 ..= I_J` using `N = 2J + 4`.
pub fn krylov_moments(params: &ModelParams, order: usize) -> Result<MomentTable> {
    krylov_moments_with_basis(params, order, default_basis(order))
}

/// One moment as a polynomial in (ω₀, ω, g).
#[derive(Debug, Clone, PartialEq)]
pub struct PolyMoment {
    pub order: usize,
    pub poly: Poly,
}

/// `μ_0 ..= μ_J` as polynomials in the model parameters.
pub fn symbolic_moments(order: usize) -> Result<Vec<PolyMoment>> {
    if order == 0 {
        return Err(Error::InvalidOrder(order));
    }
    let h = symbolic_hamiltonian(default_basis(order))?;
    Ok(moment_sequence(&h, order)
        .into_iter()
        .enumerate()
        .map(|(order, poly)| PolyMoment { order, poly })
        .collect())
}

/// `I_1 ..= I_J` as polynomials.
pub fn symbolic_connected_moments(order: usize) -> Result<Vec<Poly>> {
    let mu: Vec<Poly> = symbolic_moments(order)?.into_iter().map(|m| m.poly).collect();
    connected_moments(&mu)
}

/// Whether `μ_j` is the same at truncations `n1` and `n2`.
pub fn truncation_check(params: &ModelParams, order: usize, n1: usize, n2: usize) -> Result<bool> {
    let needed = minimal_basis(order);
    for n in [n1, n2] {
        if n < needed {
            return Err(Error::InsufficientBasis {
                order,
                needed,
                got: n,
            });
        }
    }
    let at = |n: usize| -> Result<BigRational> {
        let h: BandSparseMatrix<BigRational> = scaled_hamiltonian(params, n)?;
        Ok(moment_sequence(&h, order).pop().unwrap_or_else(BigRational::zero))
    };
    Ok(at(n1)? == at(n2)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{is_even_position, parity_matrix};
    use crate::poly::Symbol;

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(p.into(), d.into())
    }

    #[test]
    fn low_order_moments() {
        let t = krylov_moments(&ModelParams::from_ints(1, 1, 1).unwrap(), 2).unwrap();
        assert_eq!(t.mu(), &[q(1, 1), q(-1, 2), q(17, 4)]);
        assert_eq!(t.basis_size_used(), 8);

        let t = krylov_moments(&ModelParams::from_ints(1, 2, 5).unwrap(), 3).unwrap();
        assert_eq!(t.mu()[3], q(1199, 8));
    }

    #[test]
    fn decoupled_trial_state_is_an_eigenstate() {
        let t = krylov_moments(&ModelParams::from_ints(1, 1, 0).unwrap(), 5).unwrap();
        for (j, m) in t.mu().iter().enumerate() {
            assert_eq!(*m, num_traits::pow(q(-1, 2), j));
        }
        assert_eq!(*t.connected_at(1), q(-1, 2));
        assert!(t.connected()[1..].iter().all(Zero::is_zero));
    }

    #[test]
    fn connected_moments_unit_coupling() {
        let t = krylov_moments(&ModelParams::from_ints(1, 1, 1).unwrap(), 5).unwrap();
        assert_eq!(t.connected(), &[q(-1, 2), q(4, 1), q(8, 1), q(16, 1), q(-32, 1)]);
    }

    #[test]
    fn unnormalized_input_is_rejected() {
        assert_eq!(
            connected_moments(&[q(2, 1), q(1, 1)]),
            Err(Error::UnnormalizedTrialState)
        );
        assert_eq!(connected_moments::<BigRational>(&[]), Err(Error::UnnormalizedTrialState));
    }

    #[test]
    fn symbolic_first_moments() {
        let mu = symbolic_moments(4).unwrap();
        let w0 = Poly::var(Symbol::Omega0);
        let w = Poly::var(Symbol::Omega);
        let g = Poly::var(Symbol::G);
        assert_eq!(mu[1].poly, w0.scale(&q(-1, 2)));
        let expect4 = g.pow(4).scale(&q(48, 1))
            + g.pow(2).scale(&q(2, 1)) * (w.pow(2).scale(&q(2, 1)) + w0.pow(2))
            + w0.pow(4).scale(&q(1, 16));
        assert_eq!(mu[4].poly, expect4);
    }

    #[test]
    fn symbolic_matches_rational_pipeline() {
        let params = ModelParams::from_ints(1, 1, 1).unwrap();
        let mu = symbolic_moments(5).unwrap();
        let t = krylov_moments(&params, 5).unwrap();
        assert_eq!(mu[5].poly.eval(&params), t.mu()[5]);
    }

    #[test]
    fn truncation_examples() {
        let p = ModelParams::from_ints(1, 1, 5).unwrap();
        assert!(truncation_check(&p, 10, 22, 2000).unwrap());
        assert!(truncation_check(&ModelParams::from_ints(1, 2, 5).unwrap(), 50, 102, 256).unwrap());
        assert_eq!(
            truncation_check(&p, 10, 18, 2000),
            Err(Error::InsufficientBasis {
                order: 10,
                needed: 22,
                got: 18
            })
        );
    }

    #[test]
    fn krylov_vectors_stay_in_even_sector() {
        let p = ModelParams::new(q(3, 2), q(2, 3), q(5, 4)).unwrap();
        let h: BandSparseMatrix<BigRational> = scaled_hamiltonian(&p, 40).unwrap();
        for w in krylov_vectors(&h, 19) {
            for (i, v) in w.iter().enumerate() {
                if !is_even_position(i) {
                    assert!(v.is_zero());
                }
            }
        }
        let pi: BandSparseMatrix<BigRational> = parity_matrix(40).unwrap();
        assert!(h.mul(&pi).sub(&pi.mul(&h)).is_zero_matrix());
    }

    #[test]
    fn insufficient_basis_and_zero_order() {
        let p = ModelParams::from_ints(1, 1, 1).unwrap();
        assert!(matches!(
            krylov_moments_with_basis(&p, 5, 10),
            Err(Error::InsufficientBasis { .. })
        ));
        assert_eq!(krylov_moments(&p, 0), Err(Error::InvalidOrder(0)));
    }
}
