//! Ground-state estimates from connected moments: the Hankel (Knowles) and
//! nested-product (Cioslowski) closed forms of the connected-moments
//! expansion, and the truncated t-expansion of `E(t)`.
//!
//! Connected moments are passed as a slice whose element `k` is `I_{k+1}`,
//! matching [`MomentTable::connected`](crate::MomentTable::connected).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::bareiss;

/// Correlation energy and ground-state estimate at CMX order `m`.
#[derive(Debug, Clone, PartialEq)]
pub struct CmxEstimate {
    pub order: usize,
    pub e_corr: BigRational,
    pub e0: BigRational,
}

impl CmxEstimate {
    /// `I_2 ..= I_{2m+1}` enter the formula.
    pub fn moments_consumed(&self) -> usize {
        2 * self.order + 1
    }
}

/// Which closed form to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmxFormula {
    Knowles,
    Cioslowski,
}

fn require(connected: &[BigRational], m: usize) -> Result<()> {
    if m == 0 {
        return Err(Error::InvalidOrder(m));
    }
    let needed = 2 * m + 1;
    if connected.len() < needed {
        return Err(Error::NotEnoughMoments {
            needed,
            have: connected.len(),
        });
    }
    Ok(())
}

/// `I_k`, one-based.
fn at(connected: &[BigRational], k: usize) -> &BigRational {
    &connected[k - 1]
}

/// The m×m Hankel matrix `A_ij = I_{i+j+3}` (zero-based i, j).
pub fn knowles_hankel(connected: &[BigRational], m: usize) -> Vec<Vec<BigRational>> {
    (0..m)
        .map(|i| (0..m).map(|j| at(connected, i + j + 3).clone()).collect())
        .collect()
}

/// `E_corr = -vᵀ A⁻¹ v` with `v = (I_2, …, I_{m+1})`, solved exactly.
///
/// The leading sign makes order 1 the familiar `-I_2²/I_3`, identical to
/// [`cmx_cioslowski`] at that order.
pub fn cmx_knowles(connected: &[BigRational], m: usize) -> Result<CmxEstimate> {
    require(connected, m)?;
    let a = knowles_hankel(connected, m);
    let v: Vec<BigRational> = (0..m).map(|i| at(connected, i + 2).clone()).collect();
    let x = bareiss::solve(&a, &v)
        .map_err(|s| Error::DegenerateCorrelationSpace { order: m, rank: s.rank })?;
    let quad = v
        .iter()
        .zip(&x)
        .fold(BigRational::zero(), |acc, (p, q)| acc + p * q);
    let e_corr = -quad;
    Ok(CmxEstimate {
        order: m,
        e0: at(connected, 1) + &e_corr,
        e_corr,
    })
}

/// Nested product with `S_{k,1} = I_k`, `S_{k,i+1} = S_{k,i} S_{k+2,i} - S_{k+1,i}²`.
///
/// `S` grows doubly exponentially in size with the level, so this is only
/// practical for small `m`.
pub fn cmx_cioslowski(connected: &[BigRational], m: usize) -> Result<CmxEstimate> {
    require(connected, m)?;
    // s[i-1][k] holds S_{k,i}; level i needs k up to 2m + 3 - 2i.
    let top = 2 * m + 1;
    let mut s: Vec<Vec<BigRational>> = Vec::with_capacity(m);
    let mut first = vec![BigRational::zero(); top + 1];
    for (k, slot) in first.iter_mut().enumerate().take(top + 1).skip(2) {
        *slot = at(connected, k).clone();
    }
    s.push(first);
    for i in 1..m {
        let prev = &s[i - 1];
        let last = top - 2 * i;
        let mut next = vec![BigRational::zero(); last + 1];
        for k in 2..=last {
            next[k] = &prev[k] * &prev[k + 2] - &prev[k + 1] * &prev[k + 1];
        }
        s.push(next);
    }
    let s2 = |i: usize| &s[i - 1][2];
    let s3 = |i: usize| &s[i - 1][3];

    let mut tail = BigRational::one();
    for i in (2..=m).rev() {
        let den = s2(i - 1) * s2(i - 1) * s3(i);
        if den.is_zero() {
            return Err(Error::NestedDenominatorZero { level: i });
        }
        tail = BigRational::one() + s2(i) * s2(i) / den * tail;
    }
    if s3(1).is_zero() {
        return Err(Error::NestedDenominatorZero { level: 1 });
    }
    let e_corr = -(s2(1) * s2(1)) / s3(1) * tail;
    Ok(CmxEstimate {
        order: m,
        e0: at(connected, 1) + &e_corr,
        e_corr,
    })
}

pub fn cmx_estimate(connected: &[BigRational], m: usize, formula: CmxFormula) -> Result<CmxEstimate> {
    match formula {
        CmxFormula::Knowles => cmx_knowles(connected, m),
        CmxFormula::Cioslowski => cmx_cioslowski(connected, m),
    }
}

/// Orders `1 ..= m_max`, each with its own outcome.
pub fn cmx_sweep(
    connected: &[BigRational],
    m_max: usize,
    formula: CmxFormula,
) -> Vec<(usize, Result<CmxEstimate>)> {
    (1..=m_max)
        .into_par_iter()
        .map(|m| (m, cmx_estimate(connected, m, formula)))
        .collect()
}

/// Truncated t-expansion value.
#[derive(Debug, Clone, PartialEq)]
pub struct TExpansionValue {
    pub t: BigRational,
    pub order: usize,
    pub value: BigRational,
}

/// `Σ_{j=0}^{J} (-t)ʲ / j! · I_{j+1}`.
pub fn t_expansion_eval(connected: &[BigRational], t: &BigRational, order: usize) -> Result<TExpansionValue> {
    if connected.len() < order + 1 {
        return Err(Error::NotEnoughMoments {
            needed: order + 1,
            have: connected.len(),
        });
    }
    let minus_t = -t.clone();
    let mut coeff = BigRational::one();
    let mut value = BigRational::zero();
    for (j, c) in connected.iter().take(order + 1).enumerate() {
        if j > 0 {
            coeff = coeff * &minus_t / BigRational::from_integer(BigInt::from(j));
        }
        value += &coeff * c;
    }
    Ok(TExpansionValue {
        t: t.clone(),
        order,
        value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moments::{krylov_moments, symbolic_connected_moments};
    use crate::params::ModelParams;
    use crate::poly::{Poly, Symbol};

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(p.into(), d.into())
    }

    fn unit_coupling() -> Vec<BigRational> {
        krylov_moments(&ModelParams::from_ints(1, 1, 1).unwrap(), 9)
            .unwrap()
            .connected()
            .to_vec()
    }

    /// Independent route: `E_corr = det(M) / det(A)` with the bordered
    /// matrix `M = [[0, vᵀ], [v, A]]`, both determinants by Laplace-free
    /// Bareiss on different matrices.
    fn bordered_ratio(connected: &[BigRational], m: usize) -> BigRational {
        let a = knowles_hankel(connected, m);
        let mut bordered = vec![vec![BigRational::zero(); m + 1]; m + 1];
        for i in 0..m {
            bordered[0][i + 1] = connected[i + 1].clone();
            bordered[i + 1][0] = connected[i + 1].clone();
            for j in 0..m {
                bordered[i + 1][j + 1] = a[i][j].clone();
            }
        }
        bareiss::determinant(&bordered) / bareiss::determinant(&a)
    }

    #[test]
    fn order_one_unit_coupling() {
        let e = cmx_knowles(&unit_coupling(), 1).unwrap();
        assert_eq!(e.e_corr, q(-2, 1));
        assert_eq!(e.e0, q(-5, 2));
        assert_eq!(e.moments_consumed(), 3);
        assert_eq!(cmx_cioslowski(&unit_coupling(), 1).unwrap(), e);
    }

    #[test]
    fn knowles_matches_bordered_determinant() {
        let c = unit_coupling();
        for m in 1..=4 {
            let e = cmx_knowles(&c, m).unwrap();
            assert_eq!(e.e_corr, bordered_ratio(&c, m), "m = {m}");
            assert_eq!(&e.e0 - &e.e_corr, c[0]);
        }
    }

    #[test]
    fn formulas_agree_until_the_nested_form_breaks() {
        // At m = 2 both reduce to -(I2²I5 - 2 I2 I3 I4 + I3³) / (I3 I5 - I4²).
        for (a, b, g) in [(1, 1, 1), (1, 2, 1), (1, 1, 2), (2, 1, 3)] {
            let c = krylov_moments(&ModelParams::from_ints(a, b, g).unwrap(), 9)
                .unwrap()
                .connected()
                .to_vec();
            let (i2, i3, i4, i5) = (&c[1], &c[2], &c[3], &c[4]);
            let closed = -(i2 * i2 * i5 - i2 * i3 * i4 * q(2, 1) + i3 * i3 * i3) / (i3 * i5 - i4 * i4);
            assert_eq!(cmx_knowles(&c, 2).unwrap().e_corr, closed);
            assert_eq!(cmx_cioslowski(&c, 2).unwrap().e_corr, closed);
            // I2 I4 = I3² for this model, so S_{2,2} = 0 and the nested form
            // stops at level 3 while the Hankel form carries on.
            assert_eq!(i2 * i4, i3 * i3);
            assert_eq!(cmx_cioslowski(&c, 3), Err(Error::NestedDenominatorZero { level: 3 }));
            assert!(cmx_knowles(&c, 3).is_ok());
        }
    }

    #[test]
    fn decoupled_limit_is_degenerate() {
        let c = krylov_moments(&ModelParams::from_ints(1, 1, 0).unwrap(), 7)
            .unwrap()
            .connected()
            .to_vec();
        for m in 1..=3 {
            assert_eq!(
                cmx_knowles(&c, m),
                Err(Error::DegenerateCorrelationSpace { order: m, rank: 0 })
            );
        }
        assert_eq!(cmx_cioslowski(&c, 1), Err(Error::NestedDenominatorZero { level: 1 }));
        assert!(matches!(cmx_cioslowski(&c, 3), Err(Error::NestedDenominatorZero { .. })));
    }

    #[test]
    fn not_enough_moments() {
        assert_eq!(
            cmx_knowles(&unit_coupling()[..4], 2),
            Err(Error::NotEnoughMoments { needed: 5, have: 4 })
        );
        assert_eq!(cmx_knowles(&unit_coupling(), 0), Err(Error::InvalidOrder(0)));
    }

    #[test]
    fn hankel_is_symmetric() {
        let a = knowles_hankel(&unit_coupling(), 4);
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(a[i][j], a[j][i]);
            }
        }
    }

    #[test]
    fn t_expansion_examples() {
        let c = unit_coupling();
        assert_eq!(t_expansion_eval(&c, &q(0, 1), 6).unwrap().value, c[0]);
        let t = q(3, 7);
        assert_eq!(t_expansion_eval(&c, &t, 1).unwrap().value, &c[0] - &t * &c[1]);
        // Second route: the tabulated I_1..I_5 summed term by term.
        let terms = [q(-1, 2), q(-4, 10), q(8, 200), q(-16, 6000), q(-32, 240000)];
        let expect = terms.iter().fold(BigRational::zero(), |a, b| a + b);
        let got = t_expansion_eval(&c, &q(1, 10), 4).unwrap();
        assert_eq!(got.value, expect);
        assert!(t_expansion_eval(&c[..3], &t, 3).is_err());
    }

    #[test]
    fn weak_coupling_limit_of_order_one() {
        // E0 ≈ I1 - I2²/I3 = -ω₀/2 - 4g²/(ω + ω₀) exactly at first order.
        let i = symbolic_connected_moments(3).unwrap();
        let w0 = Poly::var(Symbol::Omega0);
        let w = Poly::var(Symbol::Omega);
        let g = Poly::var(Symbol::G);
        // I2² / I3 = 16g⁴ / (4g²(ω+ω₀)) = 4g²/(ω+ω₀): check I2² = (4g²/(ω+ω₀))·I3 via cross-multiplication.
        let lhs = i[1].clone() * i[1].clone() * (w.clone() + w0.clone());
        let rhs = g.pow(2).scale(&q(4, 1)) * i[2].clone();
        assert_eq!(lhs, rhs);
        for &(num, den) in &[(1, 10), (1, 100), (1, 1000)] {
            let p = ModelParams::new(q(1, 1), q(1, 1), q(num, den)).unwrap();
            let c = krylov_moments(&p, 3).unwrap().connected().to_vec();
            let e = cmx_knowles(&c, 1).unwrap();
            let gsq = q(num * num, den * den);
            assert_eq!(e.e0, q(-1, 2) - gsq * q(4, 2));
        }
    }
}
