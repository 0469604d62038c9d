//! Banded sparse matrices stored by diagonals.

use std::fmt::Write as _;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::rational::{parse_rational, to_fraction_string, to_scientific};
use crate::scalar::{Real, Ring};

/// Square matrix whose nonzero entries satisfy `|row - col| <= bandwidth`.
///
/// Diagonal `off` (from `-bandwidth` to `bandwidth`) is stored contiguously;
/// element `i` of an upper diagonal is `(i, i + off)`, of a lower diagonal
/// `(i + |off|, i)`. Indices are zero-based.
#[derive(Clone, Debug, PartialEq)]
pub struct BandSparseMatrix<S> {
    dim: usize,
    bandwidth: usize,
    diags: Vec<Vec<S>>,
}

impl<S: Ring> BandSparseMatrix<S> {
    pub fn zeros(dim: usize, bandwidth: usize) -> Self {
        let bandwidth = bandwidth.min(dim.saturating_sub(1));
        let diags = (0..=2 * bandwidth)
            .map(|k| {
                let off = k.abs_diff(bandwidth);
                vec![S::zero(); dim - off]
            })
            .collect();
        BandSparseMatrix {
            dim,
            bandwidth,
            diags,
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, 0);
        for i in 0..dim {
            m.set(i, i, S::one());
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Storage bandwidth.
    pub fn bandwidth(&self) -> usize {
        self.bandwidth
    }

    fn slot(&self, row: usize, col: usize) -> Option<(usize, usize)> {
        if row >= self.dim || col >= self.dim || row.abs_diff(col) > self.bandwidth {
            return None;
        }
        if col >= row {
            Some((self.bandwidth + (col - row), row))
        } else {
            Some((self.bandwidth - (row - col), col))
        }
    }

    pub fn get(&self, row: usize, col: usize) -> S {
        match self.slot(row, col) {
            Some((k, i)) => self.diags[k][i].clone(),
            None => S::zero(),
        }
    }

    /// # Panics
    /// If `(row, col)` lies outside the band.
    pub fn set(&mut self, row: usize, col: usize, value: S) {
        let (k, i) = self
            .slot(row, col)
            .unwrap_or_else(|| panic!("({row}, {col}) outside band {}", self.bandwidth));
        self.diags[k][i] = value;
    }

    /// Diagonal at offset `off` (positive above the main diagonal).
    pub fn diagonal(&self, off: isize) -> &[S] {
        &self.diags[(self.bandwidth as isize + off) as usize]
    }

    /// Nonzero entries in row-major order.
    pub fn entries(&self) -> Vec<(usize, usize, S)> {
        let mut out = Vec::new();
        for row in 0..self.dim {
            let lo = row.saturating_sub(self.bandwidth);
            let hi = (row + self.bandwidth).min(self.dim - 1);
            for col in lo..=hi {
                let v = self.get(row, col);
                if !v.is_zero() {
                    out.push((row, col, v));
                }
            }
        }
        out
    }

    /// Largest `|row - col|` over the nonzero entries.
    pub fn effective_bandwidth(&self) -> usize {
        self.entries()
            .iter()
            .map(|(r, c, _)| r.abs_diff(*c))
            .max()
            .unwrap_or(0)
    }

    pub fn matvec(&self, x: &[S]) -> Vec<S> {
        assert_eq!(x.len(), self.dim, "dimension mismatch");
        (0..self.dim)
            .map(|row| {
                let lo = row.saturating_sub(self.bandwidth);
                let hi = (row + self.bandwidth).min(self.dim - 1);
                (lo..=hi).fold(S::zero(), |acc, col| {
                    let a = self.get(row, col);
                    if a.is_zero() || x[col].is_zero() {
                        acc
                    } else {
                        acc + a * x[col].clone()
                    }
                })
            })
            .collect()
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let mut out = Self::zeros(self.dim, self.bandwidth + other.bandwidth);
        for (r, k, a) in self.entries() {
            let lo = k.saturating_sub(other.bandwidth);
            let hi = (k + other.bandwidth).min(self.dim - 1);
            for c in lo..=hi {
                let b = other.get(k, c);
                if !b.is_zero() {
                    let cur = out.get(r, c);
                    out.set(r, c, cur + a.clone() * b);
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let mut out = Self::zeros(self.dim, self.bandwidth.max(other.bandwidth));
        for (r, c, v) in self.entries() {
            out.set(r, c, v);
        }
        for (r, c, v) in other.entries() {
            let cur = out.get(r, c);
            out.set(r, c, cur - v);
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.dim, self.bandwidth);
        for (r, c, v) in self.entries() {
            out.set(c, r, v);
        }
        out
    }

    pub fn is_symmetric(&self) -> bool {
        self.entries().iter().all(|(r, c, v)| self.get(*c, *r) == *v)
    }

    pub fn is_zero_matrix(&self) -> bool {
        self.diags.iter().flatten().all(|v| v.is_zero())
    }

    /// Entrywise image under `f`, keeping the band layout.
    pub fn map<T: Ring>(&self, mut f: impl FnMut(&S) -> T) -> BandSparseMatrix<T> {
        BandSparseMatrix {
            dim: self.dim,
            bandwidth: self.bandwidth,
            diags: self
                .diags
                .iter()
                .map(|d| d.iter().map(&mut f).collect())
                .collect(),
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<S>> {
        (0..self.dim)
            .map(|r| (0..self.dim).map(|c| self.get(r, c)).collect())
            .collect()
    }

    /// Plain-text triplets, one `row col value` per line with one-based
    /// indices, preceded by a `# dim=<N> bandwidth=<b>` header.
    pub fn to_triplets(&self, mut fmt_value: impl FnMut(&S) -> String) -> String {
        let mut out = format!("# dim={} bandwidth={}\n", self.dim, self.bandwidth);
        for (r, c, v) in self.entries() {
            let _ = writeln!(out, "{} {} {}", r + 1, c + 1, fmt_value(&v));
        }
        out
    }
}

impl BandSparseMatrix<BigRational> {
    pub fn to_rational_triplets(&self) -> String {
        self.to_triplets(to_fraction_string)
    }

    /// Parse the triplet format written by [`Self::to_triplets`]; values may
    /// be fractions or decimal strings.
    pub fn from_triplets(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty triplet file".into()))?;
        let field = |key: &str| -> Result<usize> {
            header
                .split_whitespace()
                .find_map(|t| t.strip_prefix(key))
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| Error::Parse(format!("missing {key} in header {header:?}")))
        };
        let dim = field("dim=")?;
        let bandwidth = field("bandwidth=")?;
        let mut m = Self::zeros(dim, bandwidth);
        for line in lines.filter(|l| !l.trim().is_empty() && !l.starts_with('#')) {
            let parts: Vec<&str> = line.split_whitespace().collect();
            let [r, c, v] = parts.as_slice() else {
                return Err(Error::Parse(format!("bad triplet line {line:?}")));
            };
            let r: usize = r.parse().map_err(|_| Error::Parse(format!("bad row in {line:?}")))?;
            let c: usize = c.parse().map_err(|_| Error::Parse(format!("bad col in {line:?}")))?;
            if r == 0 || c == 0 || r > dim || c > dim || r.abs_diff(c) > m.bandwidth {
                return Err(Error::Parse(format!("entry out of range in {line:?}")));
            }
            m.set(r - 1, c - 1, parse_rational(v)?);
        }
        Ok(m)
    }
}

impl<R: Real> BandSparseMatrix<R> {
    /// Triplets with values as decimal strings of `sig` significant digits.
    pub fn to_decimal_triplets(&self, sig: u32) -> String {
        self.to_triplets(|v| to_scientific(&v.to_rational(), sig))
    }

    /// Lower bound on the spectrum of a symmetric matrix (Gershgorin discs),
    /// restricted to the rows selected by `keep`.
    pub fn gershgorin_lower_bound(&self, keep: impl Fn(usize) -> bool) -> R {
        let mut best: Option<R> = None;
        for row in (0..self.dim).filter(|&r| keep(r)) {
            let lo = row.saturating_sub(self.bandwidth);
            let hi = (row + self.bandwidth).min(self.dim - 1);
            let radius = (lo..=hi)
                .filter(|&c| c != row)
                .fold(R::zero(), |acc, c| acc + self.get(row, c).abs());
            let bound = self.get(row, row) - radius;
            best = Some(match best {
                Some(b) if b <= bound => b,
                _ => bound,
            });
        }
        best.unwrap_or_else(R::zero)
    }
}
