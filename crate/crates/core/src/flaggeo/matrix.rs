//! Compositions and orbit-indexing matrices.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An `n`-part composition of `d` (zero parts allowed).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CompositionType {
    parts: Vec<u32>,
}

impl CompositionType {
    pub fn new(parts: Vec<u32>) -> Self {
        Self { parts }
    }

    pub fn zero(n: usize) -> Self {
        Self { parts: vec![0; n] }
    }

    /// The standard basis vector `e_i` (1-based).
    pub fn unit(n: usize, i: usize) -> Self {
        let mut parts = vec![0; n];
        parts[i - 1] = 1;
        Self { parts }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn n(&self) -> usize {
        self.parts.len()
    }

    pub fn d(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn add(&self, other: &CompositionType) -> CompositionType {
        assert_eq!(self.n(), other.n());
        CompositionType::new(
            self.parts
                .iter()
                .zip(&other.parts)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    /// Componentwise difference, `None` if some part would be negative.
    pub fn checked_sub(&self, other: &CompositionType) -> Option<CompositionType> {
        if self.n() != other.n() {
            return None;
        }
        let parts: Option<Vec<u32>> = self
            .parts
            .iter()
            .zip(&other.parts)
            .map(|(a, b)| a.checked_sub(*b))
            .collect();
        parts.map(CompositionType::new)
    }

    /// Every composition of `d` into `n` parts, in lexicographic order.
    pub fn all(n: usize, d: u32) -> Vec<CompositionType> {
        fn rec(n: usize, d: u32, cur: &mut Vec<u32>, out: &mut Vec<CompositionType>) {
            if cur.len() + 1 == n {
                cur.push(d);
                out.push(CompositionType::new(cur.clone()));
                cur.pop();
                return;
            }
            for k in 0..=d {
                cur.push(k);
                rec(n, d - k, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        if n == 0 {
            if d == 0 {
                out.push(CompositionType::new(Vec::new()));
            }
            return out;
        }
        rec(n, d, &mut Vec::new(), &mut out);
        out
    }

    /// Compositions `c` with `0 <= c <= self` componentwise and `|c| = k`.
    pub fn sub_compositions(&self, k: u32) -> Vec<CompositionType> {
        CompositionType::all(self.n(), k)
            .into_iter()
            .filter(|c| c.parts.iter().zip(&self.parts).all(|(a, b)| a <= b))
            .collect()
    }
}

impl fmt::Display for CompositionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(u32::to_string).collect();
        write!(f, "({})", s.join(","))
    }
}

/// `n × n` non-negative integer matrix; indexes the orbit `O_M` and the
/// basis function `1_M`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MatrixType {
    n: usize,
    entries: Vec<u32>,
}

impl MatrixType {
    pub fn new(rows: Vec<Vec<u32>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Domain("matrix types need n >= 1".into()));
        }
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Domain("matrix type must be square".into()));
        }
        Ok(Self {
            n,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn zero(n: usize) -> Self {
        Self {
            n,
            entries: vec![0; n * n],
        }
    }

    /// `e_ij` (1-based).
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zero(n);
        m.entries[(i - 1) * n + (j - 1)] = 1;
        m
    }

    /// `k · e_ij`.
    pub fn cell(n: usize, i: usize, j: usize, k: u32) -> Self {
        let mut m = Self::zero(n);
        m.entries[(i - 1) * n + (j - 1)] = k;
        m
    }

    pub fn diagonal(c: &CompositionType) -> Self {
        let n = c.n();
        let mut m = Self::zero(n);
        for (i, &x) in c.parts().iter().enumerate() {
            m.entries[i * n + i] = x;
        }
        m
    }

    /// The permutation matrix with ones at `(i, σ(i))`, `σ` 0-based.
    pub fn permutation(sigma: &[usize]) -> Self {
        let n = sigma.len();
        let mut m = Self::zero(n);
        for (i, &s) in sigma.iter().enumerate() {
            m.entries[i * n + s] = 1;
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Entry `m_ij`, 1-based.
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[(i - 1) * self.n + (j - 1)]
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        self.entries.chunks(self.n).map(<[u32]>::to_vec).collect()
    }

    /// Nonzero cells `(i, j, m_ij)`, 1-based, in lexicographic order.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, &m)| m > 0)
            .map(move |(k, &m)| (k / self.n + 1, k % self.n + 1, m))
    }

    pub fn ro(&self) -> CompositionType {
        CompositionType::new(
            self.entries
                .chunks(self.n)
                .map(|r| r.iter().sum())
                .collect(),
        )
    }

    pub fn co(&self) -> CompositionType {
        CompositionType::new(
            (0..self.n)
                .map(|j| (0..self.n).map(|i| self.entries[i * self.n + j]).sum())
                .collect(),
        )
    }

    pub fn d(&self) -> u32 {
        self.entries.iter().sum()
    }

    pub fn add(&self, other: &MatrixType) -> MatrixType {
        assert_eq!(self.n, other.n);
        MatrixType {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn transpose(&self) -> MatrixType {
        let n = self.n;
        let mut m = Self::zero(n);
        for i in 0..n {
            for j in 0..n {
                m.entries[j * n + i] = self.entries[i * n + j];
            }
        }
        m
    }

    /// `J M J` with `J` the antidiagonal permutation.
    pub fn jmj(&self) -> MatrixType {
        let mut entries = self.entries.clone();
        entries.reverse();
        MatrixType { n: self.n, entries }
    }

    pub fn is_diagonal(&self) -> bool {
        self.cells().all(|(i, j, _)| i == j)
    }

    /// `d(M) = Σ m_ij m_kl` over ordered pairs of cells with `i < k` or `j < l`.
    pub fn orbit_dim(&self) -> i64 {
        let cells: Vec<_> = self.cells().collect();
        let mut total = 0i64;
        for &(i, j, a) in &cells {
            for &(k, l, b) in &cells {
                if i < k || j < l {
                    total += (a as i64) * (b as i64);
                }
            }
        }
        total
    }

    /// `Σ_{i>k, j<l} m_ij m_kl`; the length `l(σ)` on permutation matrices.
    pub fn crossings(&self) -> i64 {
        let cells: Vec<_> = self.cells().collect();
        let mut total = 0i64;
        for &(i, j, a) in &cells {
            for &(k, l, b) in &cells {
                if i > k && j < l {
                    total += (a as i64) * (b as i64);
                }
            }
        }
        total
    }

    /// `Θ_d` for `n × n` matrices.
    pub fn theta(n: usize, d: u32) -> Vec<MatrixType> {
        CompositionType::all(n * n, d)
            .into_iter()
            .map(|c| MatrixType {
                n,
                entries: c.parts().to_vec(),
            })
            .collect()
    }

    /// `Θ_d(ro, co)`: matrices with prescribed row and column sums.
    pub fn with_margins(ro: &CompositionType, co: &CompositionType) -> Vec<MatrixType> {
        let n = ro.n();
        assert_eq!(n, co.n());
        if ro.d() != co.d() {
            return Vec::new();
        }
        let mut out = Vec::new();
        let mut rows: Vec<Vec<u32>> = Vec::new();
        fn rec(
            i: usize,
            ro: &CompositionType,
            remaining: &mut Vec<u32>,
            rows: &mut Vec<Vec<u32>>,
            out: &mut Vec<MatrixType>,
        ) {
            let n = ro.n();
            if i == n {
                if remaining.iter().all(|&x| x == 0) {
                    out.push(MatrixType {
                        n,
                        entries: rows.iter().flatten().copied().collect(),
                    });
                }
                return;
            }
            for row in CompositionType::new(remaining.clone()).sub_compositions(ro.parts()[i]) {
                for (r, x) in remaining.iter_mut().zip(row.parts()) {
                    *r -= x;
                }
                rows.push(row.parts().to_vec());
                rec(i + 1, ro, remaining, rows, out);
                rows.pop();
                for (r, x) in remaining.iter_mut().zip(row.parts()) {
                    *r += x;
                }
            }
        }
        rec(0, ro, &mut co.parts().to_vec(), &mut rows, &mut out);
        out
    }
}

impl fmt::Debug for MatrixType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for MatrixType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows()
            .iter()
            .map(|r| {
                let s: Vec<String> = r.iter().map(u32::to_string).collect();
                format!("[{}]", s.join(","))
            })
            .collect();
        write!(f, "[{}]", rows.join(","))
    }
}

impl Serialize for MatrixType {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for MatrixType {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<u32>> = Vec::deserialize(d)?;
        MatrixType::new(rows).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn margins_and_degree() {
        let m = MatrixType::new(vec![vec![1, 2], vec![0, 3]]).unwrap();
        assert_eq!(m.ro().parts(), &[3, 3]);
        assert_eq!(m.co().parts(), &[1, 5]);
        assert_eq!(m.d(), 6);
        assert_eq!(m.transpose().get(2, 1), 2);
        assert_eq!(m.jmj().get(1, 1), 3);
        assert!(MatrixType::new(vec![vec![1, 2]]).is_err());
    }

    #[test]
    fn orbit_dimension_examples() {
        assert_eq!(MatrixType::cell(2, 1, 2, 3).orbit_dim(), 0);
        let anti = MatrixType::unit(2, 1, 2).add(&MatrixType::unit(2, 2, 1));
        assert_eq!(anti.orbit_dim(), 2);
        assert_eq!(anti.crossings(), 1);
        assert_eq!(MatrixType::permutation(&[2, 1, 0]).crossings(), 3);
    }

    #[test]
    fn theta_counts() {
        // stars and bars: C(d + n^2 - 1, d)
        assert_eq!(MatrixType::theta(2, 2).len(), 10);
        assert_eq!(MatrixType::theta(2, 3).len(), 20);
        assert_eq!(MatrixType::theta(3, 1).len(), 9);
        let ro = CompositionType::new(vec![1, 1]);
        let perms = MatrixType::with_margins(&ro, &ro);
        assert_eq!(perms.len(), 2);
        let total: usize = CompositionType::all(2, 3)
            .iter()
            .flat_map(|r| {
                CompositionType::all(2, 3)
                    .into_iter()
                    .map(move |c| (r.clone(), c))
            })
            .map(|(r, c)| MatrixType::with_margins(&r, &c).len())
            .sum();
        assert_eq!(total, 20);
    }

    #[test]
    fn json_shape() {
        let m = MatrixType::unit(2, 1, 2);
        let j = serde_json::to_string(&m).unwrap();
        assert_eq!(j, "[[0,1],[0,0]]");
        let back: MatrixType = serde_json::from_str(&j).unwrap();
        assert_eq!(back, m);
    }
}
