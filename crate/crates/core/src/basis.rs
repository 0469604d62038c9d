//! Spin⊗boson product basis and the truncated Rabi Hamiltonian.
//!
//! Basis state `n = 1, 2, ...` is `|↓⟩⊗|k⟩` for odd `n` and `|↑⟩⊗|k⟩` for
//! even `n`, with `k = floor((n - 1) / 2)` bosons. The Hamiltonian
//!
//! ```text
//! H = ω₀/2 σ_z + ω b†b + g (σ₊ + σ₋)(b† + b)
//! ```
//!
//! uses the convention `⟨↑|σ₊|↓⟩ = 2`, so the coupling acts as `2g σ_x (b† + b)`.
//! It only connects states of opposite spin whose boson numbers differ by
//! one, which puts every nonzero entry within three places of the diagonal.

use num_rational::BigRational;

use crate::band::BandSparseMatrix;
use crate::error::{Error, Result};
use crate::hp::HighPrecisionReal;
use crate::params::ModelParams;
use crate::poly::{Poly, Symbol};
use crate::scalar::{ExactRing, Precision, Real, Ring};

/// Bandwidth of every Rabi Hamiltonian matrix.
pub const HAMILTONIAN_BANDWIDTH: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Spin {
    Down,
    Up,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BasisLabel {
    pub index: u64,
    pub spin: Spin,
    pub bosons: u64,
}

impl BasisLabel {
    pub fn new(spin: Spin, bosons: u64) -> Self {
        let index = match spin {
            Spin::Down => 2 * bosons + 1,
            Spin::Up => 2 * bosons + 2,
        };
        BasisLabel {
            index,
            spin,
            bosons,
        }
    }

    /// Zero-based row/column of this state.
    pub fn position(&self) -> usize {
        (self.index - 1) as usize
    }

    /// Eigenvalue of `b†b + 1/2 + σ_z/2`.
    pub fn excitations(&self) -> u64 {
        self.bosons + u64::from(self.spin == Spin::Up)
    }

    /// Eigenvalue of the parity operator `exp(iπ n̂)`.
    pub fn parity(&self) -> i8 {
        if self.excitations().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }
}

/// One-based index to (spin, bosons).
pub fn decode_index(n: i64) -> Result<BasisLabel> {
    if n < 1 {
        return Err(Error::InvalidIndex(n));
    }
    let n = n as u64;
    let spin = if n % 2 == 1 { Spin::Down } else { Spin::Up };
    Ok(BasisLabel {
        index: n,
        spin,
        bosons: (n - 1) / 2,
    })
}

/// Label of the zero-based position `i`.
pub fn label_at(i: usize) -> BasisLabel {
    decode_index(i as i64 + 1).expect("positions are non-negative")
}

pub fn encode_label(spin: Spin, bosons: u64) -> u64 {
    BasisLabel::new(spin, bosons).index
}

fn check_truncation(n: usize) -> Result<()> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(Error::InvalidTruncation(n));
    }
    Ok(())
}

/// Which representation of the Hamiltonian to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Form {
    /// The Hermitian matrix, with `√k` boson factors.
    Symmetric,
    /// `D H D⁻¹` with `D = diag(√(k!))`: rational entries, same `(Hʲ)₁₁`.
    Scaled,
}

/// Hamiltonian in either representation, in its natural scalar ring.
#[derive(Debug, Clone)]
pub enum HamiltonianMatrix {
    Symmetric(BandSparseMatrix<HighPrecisionReal>),
    Scaled(BandSparseMatrix<BigRational>),
}

/// Fills a Hamiltonian-shaped matrix. `hop(k, raising)` is the entry that
/// links boson number `k` to `k + 1`; `raising` selects the lower triangle
/// side (row has `k + 1` bosons).
fn assemble<S: Ring>(
    n: usize,
    diag: impl Fn(BasisLabel) -> S,
    hop: impl Fn(u64, bool) -> S,
) -> BandSparseMatrix<S> {
    let mut m = BandSparseMatrix::zeros(n, HAMILTONIAN_BANDWIDTH);
    for i in 0..n {
        m.set(i, i, diag(label_at(i)));
    }
    for i in 0..n {
        let from = label_at(i);
        let partner_spin = match from.spin {
            Spin::Down => Spin::Up,
            Spin::Up => Spin::Down,
        };
        let to = BasisLabel::new(partner_spin, from.bosons + 1);
        let j = to.position();
        if j >= n {
            continue;
        }
        let lowering = hop(from.bosons, false);
        let raising = hop(from.bosons, true);
        if !lowering.is_zero() {
            m.set(i, j, lowering);
        }
        if !raising.is_zero() {
            m.set(j, i, raising);
        }
    }
    m
}

fn half(q: &BigRational) -> BigRational {
    q / BigRational::from_integer(2.into())
}

/// Symmetric form with entries rounded to `prec`.
pub fn symmetric_hamiltonian<R: Real>(
    params: &ModelParams,
    n: usize,
    prec: Precision,
) -> Result<BandSparseMatrix<R>> {
    check_truncation(n)?;
    let half_w0 = R::from_rational_at(&half(params.omega0()), prec);
    let omega = R::from_rational_at(params.omega(), prec);
    let two_g = R::from_rational_at(&(params.g() * BigRational::from_integer(2.into())), prec);
    let int = |k: u64| R::from_rational_at(&BigRational::from_integer(k.into()), prec);
    Ok(assemble(
        n,
        |label| {
            let base = omega.clone() * int(label.bosons);
            match label.spin {
                Spin::Down => base - half_w0.clone(),
                Spin::Up => base + half_w0.clone(),
            }
        },
        |k, _| two_g.clone() * int(k + 1).sqrt(),
    ))
}

/// Scaled form over any ring, given the ring images of ω₀/2, ω, 2g and of
/// the integers.
pub fn scaled_hamiltonian_with<S: Ring>(
    n: usize,
    half_omega0: S,
    omega: S,
    two_g: S,
    int: impl Fn(u64) -> S,
) -> Result<BandSparseMatrix<S>> {
    check_truncation(n)?;
    Ok(assemble(
        n,
        |label| {
            let base = omega.clone() * int(label.bosons);
            match label.spin {
                Spin::Down => base - half_omega0.clone(),
                Spin::Up => base + half_omega0.clone(),
            }
        },
        |k, raising| {
            if raising {
                two_g.clone() * int(k + 1)
            } else {
                two_g.clone()
            }
        },
    ))
}

/// Scaled form at rational parameter values.
pub fn scaled_hamiltonian<S: ExactRing>(params: &ModelParams, n: usize) -> Result<BandSparseMatrix<S>> {
    scaled_hamiltonian_with(
        n,
        S::from_rational(&half(params.omega0())),
        S::from_rational(params.omega()),
        S::from_rational(&(params.g() * BigRational::from_integer(2.into()))),
        |k| S::from_rational(&BigRational::from_integer(k.into())),
    )
}

/// Scaled form with ω₀, ω, g left as indeterminates.
pub fn symbolic_hamiltonian(n: usize) -> Result<BandSparseMatrix<Poly>> {
    let half_r = BigRational::new(1.into(), 2.into());
    scaled_hamiltonian_with(
        n,
        Poly::var(Symbol::Omega0).scale(&half_r),
        Poly::var(Symbol::Omega),
        Poly::var(Symbol::G).scale(&BigRational::from_integer(2.into())),
        |k| Poly::from(k as i64),
    )
}

/// Build in the requested form; the symmetric form is rounded to `prec`.
pub fn build_hamiltonian(
    params: &ModelParams,
    n: usize,
    form: Form,
    prec: Precision,
) -> Result<HamiltonianMatrix> {
    Ok(match form {
        Form::Symmetric => HamiltonianMatrix::Symmetric(symmetric_hamiltonian(params, n, prec)?),
        Form::Scaled => HamiltonianMatrix::Scaled(scaled_hamiltonian(params, n)?),
    })
}

/// Diagonal parity matrix over any ring.
pub fn parity_matrix<S: Ring>(n: usize) -> Result<BandSparseMatrix<S>> {
    check_truncation(n)?;
    let mut m = BandSparseMatrix::zeros(n, 0);
    for i in 0..n {
        let v = if label_at(i).parity() > 0 {
            S::one()
        } else {
            -S::one()
        };
        m.set(i, i, v);
    }
    Ok(m)
}

pub fn build_parity(n: usize) -> Result<BandSparseMatrix<BigRational>> {
    parity_matrix(n)
}

/// `+1` when the zero-based position lies in the sector of the trial state.
pub fn is_even_position(i: usize) -> bool {
    label_at(i).parity() > 0
}

/// `e₁` in dimension `n`.
pub fn trial_vector<S: Ring>(n: usize) -> Vec<S> {
    let mut v = vec![S::zero(); n];
    v[0] = S::one();
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use num_traits::Zero;

    fn r(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn decode_examples() {
        let l = decode_index(1).unwrap();
        assert_eq!((l.spin, l.bosons), (Spin::Down, 0));
        let l = decode_index(2).unwrap();
        assert_eq!((l.spin, l.bosons), (Spin::Up, 0));
        let l = decode_index(7).unwrap();
        assert_eq!((l.spin, l.bosons), (Spin::Down, 3));
        assert_eq!(decode_index(0), Err(Error::InvalidIndex(0)));
        assert_eq!(decode_index(-3), Err(Error::InvalidIndex(-3)));
    }

    proptest! {
        #[test]
        fn encode_inverts_decode(n in 1i64..1_000_000) {
            let l = decode_index(n).unwrap();
            prop_assert_eq!(encode_label(l.spin, l.bosons), n as u64);
            prop_assert_eq!(l.spin == Spin::Down, n % 2 == 1);
            prop_assert_eq!(l.bosons, ((n - 1) / 2) as u64);
        }
    }

    #[test]
    fn two_state_block_has_no_coupling() {
        let p = ModelParams::from_ints(1, 1, 5).unwrap();
        let h: BandSparseMatrix<BigRational> = scaled_hamiltonian(&p, 2).unwrap();
        assert_eq!(h.to_dense(), vec![vec![r(-1, 2), r(0, 1)], vec![r(0, 1), r(1, 2)]]);
        let s: BandSparseMatrix<f64> = symmetric_hamiltonian(&p, 2, Precision(15)).unwrap();
        assert_eq!(s.to_dense(), vec![vec![-0.5, 0.0], vec![0.0, 0.5]]);
    }

    #[test]
    fn coupling_entries() {
        let p = ModelParams::from_ints(1, 1, 1).unwrap();
        let s: BandSparseMatrix<HighPrecisionReal> = symmetric_hamiltonian(&p, 8, Precision(50)).unwrap();
        assert_eq!(s.get(0, 3).to_f64(), 2.0);
        assert_eq!(s.get(3, 0).to_f64(), 2.0);
        // ⟨↑,0|H|↓,1⟩ = 2g√1, ⟨↓,1|H|↑,2⟩ = 2g√2
        assert_eq!(s.get(1, 2).to_f64(), 2.0);
        assert!((s.get(2, 5).to_f64() - 2.0 * 2f64.sqrt()).abs() < 1e-15);

        let h: BandSparseMatrix<BigRational> = scaled_hamiltonian(&p, 8).unwrap();
        assert_eq!(h.get(3, 0), r(2, 1));
        assert_eq!(h.get(0, 3), r(2, 1));
        assert_eq!(h.get(2, 5), r(2, 1));
        assert_eq!(h.get(5, 2), r(4, 1));
    }

    #[test]
    fn scaled_is_d_conjugate_of_symmetric() {
        // Oracle: conjugate the symmetric matrix numerically by D = diag(√(k!)).
        let p = ModelParams::new(r(3, 2), r(5, 7), r(2, 3)).unwrap();
        let prec = Precision(50);
        let n = 16;
        let s: BandSparseMatrix<HighPrecisionReal> = symmetric_hamiltonian(&p, n, prec).unwrap();
        let h: BandSparseMatrix<BigRational> = scaled_hamiltonian(&p, n).unwrap();
        let d = |i: usize| {
            let k = label_at(i).bosons;
            let fact: u64 = (1..=k).product();
            HighPrecisionReal::from_rational_at(&BigRational::from_integer(fact.into()), prec).sqrt()
        };
        let tol = HighPrecisionReal::epsilon_at(Precision(45));
        for i in 0..n {
            for j in 0..n {
                let conj = d(i) * s.get(i, j) / d(j);
                let exact = HighPrecisionReal::from_rational_at(&h.get(i, j), prec);
                assert!((conj - exact).abs() < tol, "entry ({i},{j})");
            }
        }
    }

    #[test]
    fn parity_entries() {
        let p = build_parity(6).unwrap();
        assert_eq!(p.get(0, 0), r(1, 1));
        assert_eq!(p.get(1, 1), r(-1, 1));
        assert_eq!(p.get(3, 3), r(1, 1));
        assert!(p.entries().iter().all(|(_, _, v)| v == &r(1, 1) || v == &r(-1, 1)));
    }

    #[test]
    fn rejects_bad_truncations() {
        let p = ModelParams::from_ints(1, 1, 1).unwrap();
        assert_eq!(
            scaled_hamiltonian::<BigRational>(&p, 7).unwrap_err(),
            Error::InvalidTruncation(7)
        );
        assert!(scaled_hamiltonian::<BigRational>(&p, 0).is_err());
        assert!(build_parity(3).is_err());
    }

    #[test]
    fn decoupled_limit_is_diagonal() {
        let p = ModelParams::from_ints(3, 2, 0).unwrap();
        let h: BandSparseMatrix<BigRational> = scaled_hamiltonian(&p, 10).unwrap();
        assert_eq!(h.effective_bandwidth(), 0);
        for i in 0..10 {
            let l = label_at(i);
            let sign = if l.spin == Spin::Up { 1 } else { -1 };
            assert_eq!(h.get(i, i), r(sign * 3, 2) + r(2 * l.bosons as i64, 1));
        }
    }

    #[test]
    fn symmetric_form_is_symmetric() {
        let p = ModelParams::from_ints(1, 2, 5).unwrap();
        let s: BandSparseMatrix<HighPrecisionReal> = symmetric_hamiltonian(&p, 40, Precision(30)).unwrap();
        assert!(s.is_symmetric());
        assert_eq!(s.effective_bandwidth(), 3);
        assert!(s.get(1, 1) > HighPrecisionReal::zero());
    }
}
