//! Fraction-free (Bareiss) elimination for exact rational systems.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// The matrix is singular; `rank` is its exact rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Singular {
    pub rank: usize,
}

/// Integer matrix `L·a` where `L` clears every denominator in `a` and `extra`.
fn clear_denominators(a: &[Vec<BigRational>], extra: &[BigRational]) -> Vec<Vec<BigInt>> {
    let lcm = a
        .iter()
        .flatten()
        .chain(extra)
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let scale = |q: &BigRational| q.numer() * (&lcm / q.denom());
    a.iter()
        .map(|row| row.iter().map(scale).collect())
        .chain((!extra.is_empty()).then(|| extra.iter().map(scale).collect()))
        .collect()
}

/// Bareiss elimination with full pivoting over the first `n` columns of an
/// `n × (n + extra)` integer matrix. Entries below the diagonal become zero;
/// `m[k][k]` is, up to sign, the leading `(k+1)`-minor of the permuted input.
/// Returns the column permutation and the number of row+column swaps, or the
/// rank if elimination runs out of nonzero pivots.
fn eliminate(m: &mut [Vec<BigInt>], n: usize) -> Result<(Vec<usize>, usize), Singular> {
    let width = m.first().map_or(0, Vec::len);
    let mut cols: Vec<usize> = (0..n).collect();
    let mut swaps = 0;
    let mut prev = BigInt::one();
    for k in 0..n {
        // Prefer a nonzero in the current column, else search the remaining block.
        let found = (k..n)
            .find(|&i| !m[i][k].is_zero())
            .map(|i| (i, k))
            .or_else(|| {
                (k..n).find_map(|i| (k + 1..n).find(|&j| !m[i][j].is_zero()).map(|j| (i, j)))
            });
        let Some((pi, pj)) = found else {
            return Err(Singular { rank: k });
        };
        if pi != k {
            m.swap(pi, k);
            swaps += 1;
        }
        if pj != k {
            for row in m.iter_mut() {
                row.swap(pj, k);
            }
            cols.swap(pj, k);
            swaps += 1;
        }
        let (top, bottom) = m.split_at_mut(k + 1);
        let pivot_row = &top[k];
        for row in bottom.iter_mut().take(n - k - 1) {
            let lead = row[k].clone();
            for j in k + 1..width {
                let v = &row[j] * &pivot_row[k] - &lead * &pivot_row[j];
                row[j] = v / &prev;
            }
            row[k] = BigInt::zero();
        }
        prev = top[k][k].clone();
    }
    Ok((cols, swaps))
}

/// Exact determinant.
pub fn determinant(a: &[Vec<BigRational>]) -> BigRational {
    let n = a.len();
    if n == 0 {
        return BigRational::one();
    }
    let lcm = a
        .iter()
        .flatten()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let mut m = clear_denominators(a, &[]);
    match eliminate(&mut m, n) {
        Err(_) => BigRational::zero(),
        Ok((_, swaps)) => {
            let d = m[n - 1][n - 1].clone();
            let d = if swaps % 2 == 1 { -d } else { d };
            BigRational::new(d, num_traits::pow(lcm, n))
        }
    }
}

/// Exact rank.
pub fn rank(a: &[Vec<BigRational>]) -> usize {
    let n = a.len();
    let mut m = clear_denominators(a, &[]);
    match eliminate(&mut m, n) {
        Ok(_) => n,
        Err(Singular { rank }) => rank,
    }
}

/// Solve the square system `a x = b` exactly.
pub fn solve(a: &[Vec<BigRational>], b: &[BigRational]) -> Result<Vec<BigRational>, Singular> {
    let n = a.len();
    assert_eq!(b.len(), n, "dimension mismatch");
    // Augment: clear_denominators appends b as an extra row; move it to a column.
    let scaled = clear_denominators(a, b);
    let (rows, rhs) = scaled.split_at(n);
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .zip(&rhs[0])
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let (cols, _) = eliminate(&mut m, n)?;
    let mut y = vec![BigRational::zero(); n];
    for k in (0..n).rev() {
        let mut s = BigRational::from_integer(m[k][n].clone());
        for j in k + 1..n {
            s -= BigRational::from_integer(m[k][j].clone()) * &y[j];
        }
        y[k] = s / BigRational::from_integer(m[k][k].clone());
    }
    let mut x = vec![BigRational::zero(); n];
    for (k, &c) in cols.iter().enumerate() {
        x[c] = y[k].clone();
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(p.into(), d.into())
    }

    /// Laplace expansion, the independent oracle for small determinants.
    fn laplace(a: &[Vec<BigRational>]) -> BigRational {
        let n = a.len();
        if n == 0 {
            return BigRational::one();
        }
        (0..n)
            .map(|j| {
                let minor: Vec<Vec<BigRational>> = a[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, v)| v.clone()).collect())
                    .collect();
                let term = &a[0][j] * laplace(&minor);
                if j % 2 == 0 {
                    term
                } else {
                    -term
                }
            })
            .fold(BigRational::zero(), |s, t| s + t)
    }

    #[test]
    fn singular_rank_is_reported() {
        let a = vec![
            vec![q(1, 1), q(2, 1), q(3, 1)],
            vec![q(2, 1), q(4, 1), q(6, 1)],
            vec![q(1, 2), q(1, 1), q(3, 2)],
        ];
        assert_eq!(rank(&a), 1);
        assert_eq!(solve(&a, &[q(1, 1), q(1, 1), q(1, 1)]), Err(Singular { rank: 1 }));
        assert!(determinant(&a).is_zero());
    }

    #[test]
    fn zero_leading_entry_needs_pivot() {
        let a = vec![vec![q(0, 1), q(1, 1)], vec![q(1, 1), q(0, 1)]];
        assert_eq!(determinant(&a), q(-1, 1));
        assert_eq!(solve(&a, &[q(2, 1), q(3, 1)]).unwrap(), vec![q(3, 1), q(2, 1)]);
        let b = vec![vec![q(0, 1), q(0, 1)], vec![q(0, 1), q(5, 1)]];
        assert_eq!(rank(&b), 1);
    }

    proptest! {
        #[test]
        fn agrees_with_laplace_and_solves(entries in proptest::collection::vec((-20i64..20, 1i64..6), 16)) {
            let a: Vec<Vec<BigRational>> = entries.chunks(4).map(|c| c.iter().map(|&(p, d)| q(p, d)).collect()).collect();
            let det = determinant(&a);
            prop_assert_eq!(&det, &laplace(&a));
            let b = vec![q(1, 1), q(-2, 3), q(0, 1), q(5, 7)];
            match solve(&a, &b) {
                Ok(x) => {
                    for (row, bi) in a.iter().zip(&b) {
                        let lhs = row.iter().zip(&x).fold(BigRational::zero(), |s, (u, v)| s + u * v);
                        prop_assert_eq!(&lhs, bi);
                    }
                }
                Err(Singular { rank: r }) => {
                    prop_assert!(det.is_zero());
                    prop_assert!(r < 4);
                }
            }
        }
    }
}
