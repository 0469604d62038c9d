//! Dense routines over [`Real`] scalars: Cholesky, LU, and symmetric
//! eigenvalues via Householder tridiagonalization and implicit QL.

use crate::scalar::Real;

pub type DenseMatrix<R> = Vec<Vec<R>>;

/// Cholesky factorization failed: the Gram matrix is (numerically) singular
/// after `rank` pivots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NotPositiveDefinite {
    pub rank: usize,
}

/// Lower-triangular `L` with `B = L Lᵀ`.
///
/// Pivot `k` is rejected when the Schur complement `d_k` falls below
/// `rel_tol * B_kk`, i.e. when column `k` is nearly in the span of the
/// previous ones.
pub fn cholesky<R: Real>(b: &[Vec<R>], rel_tol: &R) -> Result<DenseMatrix<R>, NotPositiveDefinite> {
    let n = b.len();
    let mut l = vec![vec![R::zero(); n]; n];
    for k in 0..n {
        let mut d = b[k][k].clone();
        for j in 0..k {
            d = d - l[k][j].clone() * l[k][j].clone();
        }
        // Also rejects NaN pivots.
        if d.partial_cmp(&(rel_tol.clone() * b[k][k].abs())) != Some(std::cmp::Ordering::Greater) {
            return Err(NotPositiveDefinite { rank: k });
        }
        let root = d.sqrt();
        l[k][k] = root.clone();
        for i in k + 1..n {
            let mut s = b[i][k].clone();
            for j in 0..k {
                s = s - l[i][j].clone() * l[k][j].clone();
            }
            l[i][k] = s / root.clone();
        }
    }
    Ok(l)
}

/// Solve `L y = rhs` for lower-triangular `L`.
pub fn forward_substitute<R: Real>(l: &[Vec<R>], rhs: &[R]) -> Vec<R> {
    let n = l.len();
    let mut y: Vec<R> = Vec::with_capacity(n);
    for i in 0..n {
        let mut s = rhs[i].clone();
        for (j, yj) in y.iter().enumerate() {
            s = s - l[i][j].clone() * yj.clone();
        }
        y.push(s / l[i][i].clone());
    }
    y
}

/// Solve `Lᵀ x = rhs` for lower-triangular `L`.
pub fn back_substitute_transposed<R: Real>(l: &[Vec<R>], rhs: &[R]) -> Vec<R> {
    let n = l.len();
    let mut x = vec![R::zero(); n];
    for i in (0..n).rev() {
        let mut s = rhs[i].clone();
        for j in i + 1..n {
            s = s - l[j][i].clone() * x[j].clone();
        }
        x[i] = s / l[i][i].clone();
    }
    x
}

/// `L⁻¹ A L⁻ᵀ` for symmetric `A`, symmetrized.
pub fn congruence_inverse<R: Real>(l: &[Vec<R>], a: &[Vec<R>]) -> DenseMatrix<R> {
    let n = l.len();
    // X = L⁻¹ A, column by column; A symmetric so rows of A are its columns.
    let x_cols: Vec<Vec<R>> = (0..n).map(|j| forward_substitute(l, &a[j])).collect();
    // C = L⁻¹ Xᵀ: column j of C solves L c = (row j of X) = (x_cols[*][j]).
    let c_cols: Vec<Vec<R>> = (0..n)
        .map(|j| {
            let row: Vec<R> = (0..n).map(|k| x_cols[k][j].clone()).collect();
            forward_substitute(l, &row)
        })
        .collect();
    let half = a
        .first()
        .and_then(|r| r.first())
        .map(|v| v.lift(&num_rational::BigRational::new(1.into(), 2.into())))
        .unwrap_or_else(R::one);
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (c_cols[j][i].clone() + c_cols[i][j].clone()) * half.clone())
                .collect()
        })
        .collect()
}

pub fn matvec<R: Real>(a: &[Vec<R>], x: &[R]) -> Vec<R> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(x)
                .fold(R::zero(), |acc, (p, q)| acc + p.clone() * q.clone())
        })
        .collect()
}

pub fn norm<R: Real>(x: &[R]) -> R {
    x.iter()
        .fold(R::zero(), |acc, v| acc + v.clone() * v.clone())
        .sqrt()
}

/// LU factorization with partial pivoting, `P A = L U`.
#[derive(Debug, Clone)]
pub struct DenseLu<R> {
    lu: DenseMatrix<R>,
    perm: Vec<usize>,
    swaps: usize,
}

impl<R: Real> DenseLu<R> {
    /// Exactly zero pivots are replaced by `tiny`, which keeps inverse
    /// iteration working at an exact eigenvalue.
    pub fn factor(a: &[Vec<R>], tiny: &R) -> Self {
        let n = a.len();
        let mut lu = a.to_vec();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut swaps = 0;
        for k in 0..n {
            let p = (k..n)
                .max_by(|&i, &j| {
                    lu[i][k]
                        .abs()
                        .partial_cmp(&lu[j][k].abs())
                        .unwrap_or(std::cmp::Ordering::Equal)
                })
                .unwrap_or(k);
            if p != k {
                lu.swap(p, k);
                perm.swap(p, k);
                swaps += 1;
            }
            if lu[k][k].is_zero() {
                lu[k][k] = tiny.clone();
            }
            let pivot = lu[k][k].clone();
            for i in k + 1..n {
                let f = lu[i][k].clone() / pivot.clone();
                if f.is_zero() {
                    continue;
                }
                for j in k + 1..n {
                    let t = lu[i][j].clone() - f.clone() * lu[k][j].clone();
                    lu[i][j] = t;
                }
                lu[i][k] = f;
            }
        }
        DenseLu { lu, perm, swaps }
    }

    pub fn solve(&self, b: &[R]) -> Vec<R> {
        let n = self.lu.len();
        let mut y: Vec<R> = self.perm.iter().map(|&p| b[p].clone()).collect();
        for i in 0..n {
            for j in 0..i {
                let t = y[i].clone() - self.lu[i][j].clone() * y[j].clone();
                y[i] = t;
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let t = y[i].clone() - self.lu[i][j].clone() * y[j].clone();
                y[i] = t;
            }
            y[i] = y[i].clone() / self.lu[i][i].clone();
        }
        y
    }

    pub fn determinant(&self) -> R {
        let d = self
            .lu
            .iter()
            .enumerate()
            .fold(R::one(), |acc, (i, row)| acc * row[i].clone());
        if self.swaps % 2 == 1 {
            -d
        } else {
            d
        }
    }
}

/// Reduce a symmetric matrix to tridiagonal form; returns (diagonal, subdiagonal).
pub fn tridiagonalize<R: Real>(mut a: DenseMatrix<R>) -> (Vec<R>, Vec<R>) {
    let n = a.len();
    if n == 0 {
        return (Vec::new(), Vec::new());
    }
    let proto = a[0][0].clone();
    let two = proto.lift_int(2);
    for k in 0..n.saturating_sub(2) {
        let x: Vec<R> = (k + 1..n).map(|i| a[i][k].clone()).collect();
        let xnorm = norm(&x);
        if xnorm.is_zero() {
            continue;
        }
        let alpha = if x[0] > R::zero() { -xnorm } else { xnorm };
        let mut v = x;
        v[0] = v[0].clone() - alpha.clone();
        let vv = v.iter().fold(R::zero(), |s, t| s + t.clone() * t.clone());
        if vv.is_zero() {
            continue;
        }
        let m = n - k - 1;
        // p = 2 A v / vv, K = vᵀp / vv, q = p - K v, A <- A - v qᵀ - q vᵀ
        let p: Vec<R> = (0..m)
            .map(|i| {
                (0..m).fold(R::zero(), |s, j| s + a[k + 1 + i][k + 1 + j].clone() * v[j].clone())
                    * two.clone()
                    / vv.clone()
            })
            .collect();
        let vp = v
            .iter()
            .zip(&p)
            .fold(R::zero(), |s, (a, b)| s + a.clone() * b.clone());
        let kk = vp / vv.clone();
        let q: Vec<R> = p
            .iter()
            .zip(&v)
            .map(|(pi, vi)| pi.clone() - kk.clone() * vi.clone())
            .collect();
        for i in 0..m {
            for j in 0..m {
                let t = a[k + 1 + i][k + 1 + j].clone()
                    - v[i].clone() * q[j].clone()
                    - q[i].clone() * v[j].clone();
                a[k + 1 + i][k + 1 + j] = t;
            }
        }
        a[k + 1][k] = alpha.clone();
        a[k][k + 1] = alpha;
        for i in k + 2..n {
            a[i][k] = R::zero();
            a[k][i] = R::zero();
        }
    }
    let d = (0..n).map(|i| a[i][i].clone()).collect();
    let e = (0..n - 1).map(|i| a[i + 1][i].clone()).collect();
    (d, e)
}

fn hypot<R: Real>(a: &R, b: &R) -> R {
    (a.clone() * a.clone() + b.clone() * b.clone()).sqrt()
}

/// Eigenvalues of a symmetric tridiagonal matrix, ascending. Returns `None`
/// if the QL sweep fails to converge.
pub fn tridiagonal_eigenvalues<R: Real>(mut d: Vec<R>, sub: Vec<R>) -> Option<Vec<R>> {
    let n = d.len();
    if n == 0 {
        return Some(d);
    }
    let proto = d[0].clone();
    let eps = R::epsilon_at(proto.precision());
    let zero = R::zero();
    let one = proto.lift_int(1);
    let two = proto.lift_int(2);
    let mut e = sub;
    e.push(zero.clone());
    let max_iter = 60 + 4 * proto.precision().digits() as usize;

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= eps.clone() * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > max_iter {
                return None;
            }
            let mut g = (d[l + 1].clone() - d[l].clone()) / (two.clone() * e[l].clone());
            let mut r = hypot(&g, &one);
            let signed_r = if g >= zero { r.clone() } else { -r.clone() };
            g = d[m].clone() - d[l].clone() + e[l].clone() / (g + signed_r);
            let mut s = one.clone();
            let mut c = one.clone();
            let mut p = zero.clone();
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s.clone() * e[i].clone();
                let b = c.clone() * e[i].clone();
                r = hypot(&f, &g);
                e[i + 1] = r.clone();
                if r.is_zero() {
                    d[i + 1] = d[i + 1].clone() - p.clone();
                    e[m] = zero.clone();
                    deflated = true;
                    break;
                }
                s = f / r.clone();
                c = g.clone() / r.clone();
                g = d[i + 1].clone() - p.clone();
                r = (d[i].clone() - g.clone()) * s.clone() + two.clone() * c.clone() * b.clone();
                p = s.clone() * r.clone();
                d[i + 1] = g.clone() + p.clone();
                g = c.clone() * r.clone() - b;
            }
            if deflated {
                continue;
            }
            d[l] = d[l].clone() - p;
            e[l] = g;
            e[m] = zero.clone();
        }
    }
    d.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    Some(d)
}

/// All eigenvalues of a symmetric matrix, ascending.
pub fn symmetric_eigenvalues<R: Real>(a: DenseMatrix<R>) -> Option<Vec<R>> {
    let (d, e) = tridiagonalize(a);
    tridiagonal_eigenvalues(d, e)
}

/// Eigenvector of symmetric `a` for the (converged) eigenvalue `lambda`,
/// by a few steps of inverse iteration. Normalized to unit length.
pub fn eigenvector_for<R: Real>(a: &[Vec<R>], lambda: &R, steps: usize) -> Vec<R> {
    let n = a.len();
    let proto = lambda.clone();
    let shifted: DenseMatrix<R> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        a[i][j].clone() - lambda.clone()
                    } else {
                        a[i][j].clone()
                    }
                })
                .collect()
        })
        .collect();
    let scale = a
        .iter()
        .flatten()
        .fold(proto.lift_int(1), |m, v| m.max_of(v.abs()));
    let tiny = R::epsilon_at(proto.precision()) * scale;
    let lu = DenseLu::factor(&shifted, &tiny);
    // Deterministic start with no special alignment.
    let mut y: Vec<R> = (0..n).map(|i| proto.lift_int(1 + (i as i64 * 7919) % 13)).collect();
    for _ in 0..steps.max(1) {
        y = lu.solve(&y);
        let nrm = norm(&y);
        y = y.into_iter().map(|v| v / nrm.clone()).collect();
    }
    y
}
