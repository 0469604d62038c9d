//! LU factorization of shifted banded matrices with partial pivoting.

use crate::band::BandSparseMatrix;
use crate::scalar::Real;

/// `P (A - σI) = L U` for a banded `A` with bandwidth `b`.
///
/// Row interchanges widen the upper factor to `2b` superdiagonals. Row `i`
/// keeps columns `i - b ..= i + 2b` in a fixed window; the multipliers of
/// elimination step `k` are kept separately so solves replay the same
/// sequence of swaps and updates.
#[derive(Debug, Clone)]
pub struct BandLu<R> {
    dim: usize,
    band: usize,
    rows: Vec<Vec<R>>,
    pivots: Vec<usize>,
    multipliers: Vec<Vec<R>>,
}

impl<R: Real> BandLu<R> {
    fn width(band: usize) -> usize {
        3 * band + 1
    }

    fn at(&self, row: usize, col: usize) -> &R {
        &self.rows[row][col + self.band - row]
    }

    /// Factor `a - shift·I`. Zero pivots are replaced by `tiny`.
    pub fn factor(a: &BandSparseMatrix<R>, shift: &R, tiny: &R) -> Self {
        let n = a.dim();
        let b = a.bandwidth();
        let w = Self::width(b);
        let mut rows: Vec<Vec<R>> = (0..n)
            .map(|i| {
                (0..w)
                    .map(|t| {
                        let col = (i + t) as isize - b as isize;
                        if col < 0 || col as usize >= n || col as usize > i + b {
                            R::zero()
                        } else {
                            let col = col as usize;
                            if col == i {
                                a.get(i, col) - shift.clone()
                            } else {
                                a.get(i, col)
                            }
                        }
                    })
                    .collect()
            })
            .collect();
        let idx = |row: usize, col: usize| col + b - row;

        let mut pivots = Vec::with_capacity(n);
        let mut multipliers = Vec::with_capacity(n);
        for k in 0..n {
            let last = (k + b).min(n - 1);
            let mut p = k;
            for i in k + 1..=last {
                if rows[i][idx(i, k)].abs() > rows[p][idx(p, k)].abs() {
                    p = i;
                }
            }
            let right = (k + 2 * b).min(n - 1);
            if p != k {
                for c in k..=right {
                    let (ik, ip) = (idx(k, c), idx(p, c));
                    let t = rows[k][ik].clone();
                    rows[k][ik] = rows[p][ip].clone();
                    rows[p][ip] = t;
                }
            }
            pivots.push(p);
            if rows[k][idx(k, k)].is_zero() {
                rows[k][idx(k, k)] = tiny.clone();
            }
            let pivot = rows[k][idx(k, k)].clone();
            let mut mults = Vec::with_capacity(last - k);
            for i in k + 1..=last {
                let f = rows[i][idx(i, k)].clone() / pivot.clone();
                if !f.is_zero() {
                    for c in k + 1..=right {
                        let u = rows[k][idx(k, c)].clone();
                        if u.is_zero() {
                            continue;
                        }
                        let t = rows[i][idx(i, c)].clone() - f.clone() * u;
                        rows[i][idx(i, c)] = t;
                    }
                }
                rows[i][idx(i, k)] = R::zero();
                mults.push(f);
            }
            multipliers.push(mults);
        }
        BandLu {
            dim: n,
            band: b,
            rows,
            pivots,
            multipliers,
        }
    }

    pub fn solve(&self, rhs: &[R]) -> Vec<R> {
        let n = self.dim;
        let mut y = rhs.to_vec();
        for k in 0..n {
            let p = self.pivots[k];
            if p != k {
                y.swap(k, p);
            }
            let yk = y[k].clone();
            if yk.is_zero() {
                continue;
            }
            for (t, f) in self.multipliers[k].iter().enumerate() {
                let i = k + 1 + t;
                y[i] = y[i].clone() - f.clone() * yk.clone();
            }
        }
        for i in (0..n).rev() {
            let right = (i + 2 * self.band).min(n - 1);
            let mut s = y[i].clone();
            for c in i + 1..=right {
                let u = self.at(i, c);
                if !u.is_zero() {
                    s = s - u.clone() * y[c].clone();
                }
            }
            y[i] = s / self.at(i, i).clone();
        }
        y
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hp::HighPrecisionReal;
    use crate::linalg::dense::matvec;
    use crate::scalar::Precision;
    use num_rational::BigRational;
    use num_traits::Zero;

    fn sample(n: usize) -> BandSparseMatrix<f64> {
        let mut m = BandSparseMatrix::zeros(n, 3);
        for i in 0..n {
            m.set(i, i, (i % 5) as f64 - 2.0);
            if i + 1 < n {
                m.set(i, i + 1, 1.5);
                m.set(i + 1, i, 0.5);
            }
            if i + 3 < n {
                m.set(i, i + 3, -2.0 + i as f64 * 0.1);
                m.set(i + 3, i, 3.0);
            }
        }
        m
    }

    #[test]
    fn solves_indefinite_banded_system() {
        let m = sample(40);
        let lu = BandLu::factor(&m, &0.25, &1e-300);
        let x_true: Vec<f64> = (0..40).map(|i| ((i * 37) % 11) as f64 - 5.0).collect();
        let shifted: Vec<Vec<f64>> = m
            .to_dense()
            .into_iter()
            .enumerate()
            .map(|(i, mut row)| {
                row[i] -= 0.25;
                row
            })
            .collect();
        let rhs = matvec(&shifted, &x_true);
        let x = lu.solve(&rhs);
        for (u, v) in x.iter().zip(&x_true) {
            assert!((u - v).abs() < 1e-9, "{u} vs {v}");
        }
    }

    #[test]
    fn high_precision_solve() {
        let prec = Precision(60);
        let m = sample(30).map(|v| HighPrecisionReal::from_f64_at(*v, prec));
        let shift = HighPrecisionReal::from_rational_at(&BigRational::new(1.into(), 3.into()), prec);
        let tiny = HighPrecisionReal::epsilon_at(prec);
        let lu = BandLu::factor(&m, &shift, &tiny);
        let ones: Vec<HighPrecisionReal> = (0..30).map(|_| HighPrecisionReal::from_f64_at(1.0, prec)).collect();
        let x = lu.solve(&ones);
        let ax = m.matvec(&x);
        let tol = HighPrecisionReal::epsilon_at(Precision(50));
        for i in 0..30 {
            let r = ax[i].clone() - shift.clone() * x[i].clone() - ones[i].clone();
            assert!(r.abs() < tol, "row {i}: {r}");
        }
        assert!(!x[0].is_zero());
    }
}
