//! Subspaces of `F_q^d` in reduced row-echelon form.

use std::fmt;

use crate::error::{Error, Result};

/// Arithmetic in the prime field `F_q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fq {
    q: u8,
}

impl Fq {
    pub fn new(q: u64) -> Result<Self> {
        if !crate::scalar::is_prime(q) || q > 251 {
            return Err(Error::Domain(format!("q = {q} is not a supported prime")));
        }
        Ok(Self { q: q as u8 })
    }

    pub fn q(self) -> u8 {
        self.q
    }

    pub fn add(self, a: u8, b: u8) -> u8 {
        ((a as u16 + b as u16) % self.q as u16) as u8
    }

    pub fn sub(self, a: u8, b: u8) -> u8 {
        ((a as u16 + self.q as u16 - b as u16) % self.q as u16) as u8
    }

    pub fn mul(self, a: u8, b: u8) -> u8 {
        ((a as u16 * b as u16) % self.q as u16) as u8
    }

    pub fn inv(self, a: u8) -> u8 {
        assert!(a != 0, "inverse of zero");
        // a^(q-2)
        let mut result = 1u8;
        let mut base = a;
        let mut e = self.q - 2;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(result, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        result
    }
}

/// Row-reduce in place and drop zero rows.
fn rref(f: Fq, mut rows: Vec<Vec<u8>>, width: usize) -> Vec<Vec<u8>> {
    let mut r = 0;
    for c in 0..width {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, p);
        let inv = f.inv(rows[r][c]);
        for x in rows[r].iter_mut() {
            *x = f.mul(*x, inv);
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let factor = rows[i][c];
                for k in 0..width {
                    let t = f.mul(factor, rows[r][k]);
                    rows[i][k] = f.sub(rows[i][k], t);
                }
            }
        }
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    rows
}

/// A subspace of `F_q^d`, stored by its unique RREF basis.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    q: u8,
    d: u8,
    rows: Vec<Vec<u8>>,
}

impl Subspace {
    pub fn zero(q: u64, d: usize) -> Self {
        Self {
            q: q as u8,
            d: d as u8,
            rows: Vec::new(),
        }
    }

    pub fn full(q: u64, d: usize) -> Self {
        Self::coordinate(q, d, 0..d)
    }

    /// Span of the given standard basis vectors.
    pub fn coordinate(q: u64, d: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut idx: Vec<usize> = indices.into_iter().collect();
        idx.sort_unstable();
        idx.dedup();
        let rows = idx
            .into_iter()
            .map(|i| {
                let mut r = vec![0u8; d];
                r[i] = 1;
                r
            })
            .collect();
        Self {
            q: q as u8,
            d: d as u8,
            rows,
        }
    }

    pub fn from_vectors(q: u64, d: usize, vectors: Vec<Vec<u8>>) -> Result<Self> {
        let f = Fq::new(q)?;
        for v in &vectors {
            if v.len() != d {
                return Err(Error::Mismatch(format!(
                    "vector of length {} in ambient dimension {d}",
                    v.len()
                )));
            }
        }
        let vectors = vectors
            .into_iter()
            .map(|v| v.into_iter().map(|x| x % f.q()).collect())
            .collect();
        Ok(Self {
            q: q as u8,
            d: d as u8,
            rows: rref(f, vectors, d),
        })
    }

    fn field(&self) -> Fq {
        Fq { q: self.q }
    }

    fn spanned(&self, vectors: Vec<Vec<u8>>) -> Self {
        Self {
            q: self.q,
            d: self.d,
            rows: rref(self.field(), vectors, self.d as usize),
        }
    }

    pub fn q(&self) -> u64 {
        self.q as u64
    }

    pub fn ambient(&self) -> usize {
        self.d as usize
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vec<u8>] {
        &self.rows
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows
            .iter()
            .map(|r| {
                r.iter()
                    .position(|&x| x != 0)
                    .expect("rref rows are nonzero")
            })
            .collect()
    }

    fn check_same_ambient(&self, other: &Subspace) -> Result<()> {
        if self.q != other.q || self.d != other.d {
            return Err(Error::Mismatch(format!(
                "subspaces of F_{}^{} and F_{}^{}",
                self.q, self.d, other.q, other.d
            )));
        }
        Ok(())
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_same_ambient(other)?;
        Ok(self.sum_unchecked(other))
    }

    pub(crate) fn sum_unchecked(&self, other: &Subspace) -> Subspace {
        if other.rows.is_empty() || self.rows.len() == self.d as usize {
            return self.clone();
        }
        if self.rows.is_empty() {
            return other.clone();
        }
        let mut v = self.rows.clone();
        v.extend(other.rows.iter().cloned());
        self.spanned(v)
    }

    /// Zassenhaus: reduce `[a | a ; b | 0]`; rows with vanishing left half
    /// span the intersection.
    pub fn intersection(&self, other: &Subspace) -> Result<Subspace> {
        self.check_same_ambient(other)?;
        Ok(self.intersection_unchecked(other))
    }

    pub(crate) fn intersection_unchecked(&self, other: &Subspace) -> Subspace {
        let d = self.d as usize;
        if self.rows.is_empty() || other.rows.len() == d {
            return self.clone();
        }
        if other.rows.is_empty() || self.rows.len() == d {
            return other.clone();
        }
        let mut m = Vec::with_capacity(self.rows.len() + other.rows.len());
        for r in &self.rows {
            let mut row = r.clone();
            row.extend_from_slice(r);
            m.push(row);
        }
        for r in &other.rows {
            let mut row = r.clone();
            row.extend(std::iter::repeat_n(0, d));
            m.push(row);
        }
        let reduced = rref(self.field(), m, 2 * d);
        let vecs = reduced
            .into_iter()
            .filter(|r| r[..d].iter().all(|&x| x == 0))
            .map(|r| r[d..].to_vec())
            .collect();
        self.spanned(vecs)
    }

    pub fn contains(&self, other: &Subspace) -> bool {
        other.dim() <= self.dim() && self.sum_unchecked(other).dim() == self.dim()
    }

    /// Representative of `x` modulo `self` with zeros at the pivot columns.
    fn reduce(&self, x: &[u8]) -> Vec<u8> {
        let f = self.field();
        let mut x = x.to_vec();
        for (row, p) in self.rows.iter().zip(self.pivots()) {
            let c = x[p];
            if c != 0 {
                for k in 0..x.len() {
                    x[k] = f.sub(x[k], f.mul(c, row[k]));
                }
            }
        }
        x
    }

    /// Image of `self` in `ambient / by`, in the coordinates given by the
    /// non-pivot columns of `by`.
    pub fn quotient_image(&self, by: &Subspace) -> Result<Subspace> {
        self.check_same_ambient(by)?;
        let pivots = by.pivots();
        let keep: Vec<usize> = (0..self.d as usize)
            .filter(|c| !pivots.contains(c))
            .collect();
        let vecs = self
            .rows
            .iter()
            .map(|r| {
                let red = by.reduce(r);
                keep.iter().map(|&c| red[c]).collect()
            })
            .collect();
        Ok(Subspace {
            q: self.q,
            d: keep.len() as u8,
            rows: rref(self.field(), vecs, keep.len()),
        })
    }

    /// Preimage of `w ⊆ ambient / by` (inverse of [`Subspace::quotient_image`]).
    pub fn lift_from_quotient(w: &Subspace, by: &Subspace) -> Result<Subspace> {
        let pivots = by.pivots();
        let keep: Vec<usize> = (0..by.d as usize).filter(|c| !pivots.contains(c)).collect();
        if w.d as usize != keep.len() || w.q != by.q {
            return Err(Error::Mismatch("quotient coordinates do not match".into()));
        }
        let mut vecs = by.rows.clone();
        for r in &w.rows {
            let mut x = vec![0u8; by.d as usize];
            for (k, &c) in keep.iter().enumerate() {
                x[c] = r[k];
            }
            vecs.push(x);
        }
        Ok(by.spanned(vecs))
    }

    /// Place `self ⊆ F_q^k` into `F_q^d` at coordinates `offset..offset+k`.
    pub fn embed(&self, d: usize, offset: usize) -> Subspace {
        let vecs = self
            .rows
            .iter()
            .map(|r| {
                let mut x = vec![0u8; d];
                x[offset..offset + r.len()].copy_from_slice(r);
                x
            })
            .collect();
        Subspace {
            q: self.q,
            d: d as u8,
            rows: rref(self.field(), vecs, d),
        }
    }

    /// `g · self`, where `g` acts on column vectors.
    pub fn transform(&self, g: &[Vec<u8>]) -> Subspace {
        let f = self.field();
        let d = self.d as usize;
        let vecs = self
            .rows
            .iter()
            .map(|x| {
                (0..d)
                    .map(|i| (0..d).fold(0u8, |acc, k| f.add(acc, f.mul(g[i][k], x[k]))))
                    .collect()
            })
            .collect();
        self.spanned(vecs)
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(F_{}^{}, {:?})", self.q, self.d, self.rows)
    }
}

/// All `k`-dimensional subspaces of `F_q^d`, by pivot pattern.
pub fn enumerate_subspaces(d: usize, k: usize, q: u64) -> Result<Vec<Subspace>> {
    Fq::new(q)?;
    if k > d {
        return Err(Error::Domain(format!(
            "no {k}-dimensional subspaces of F_q^{d}"
        )));
    }
    let mut out = Vec::new();
    for pivots in combinations(d, k) {
        // free slots: (row, col) with col past the row's pivot and not a pivot
        let free: Vec<(usize, usize)> = pivots
            .iter()
            .enumerate()
            .flat_map(|(r, &p)| {
                let pivots = &pivots;
                (p + 1..d)
                    .filter(move |c| !pivots.contains(c))
                    .map(move |c| (r, c))
            })
            .collect();
        let mut digits = vec![0u8; free.len()];
        loop {
            let mut rows = vec![vec![0u8; d]; k];
            for (r, &p) in pivots.iter().enumerate() {
                rows[r][p] = 1;
            }
            for (&(r, c), &x) in free.iter().zip(&digits) {
                rows[r][c] = x;
            }
            out.push(Subspace {
                q: q as u8,
                d: d as u8,
                rows,
            });
            // odometer
            let mut i = 0;
            while i < digits.len() {
                digits[i] += 1;
                if digits[i] < q as u8 {
                    break;
                }
                digits[i] = 0;
                i += 1;
            }
            if i == digits.len() {
                break;
            }
        }
    }
    Ok(out)
}

pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// All invertible `d × d` matrices over `F_q` (only sensible for tiny `d`).
pub fn general_linear_group(d: usize, q: u64) -> Result<Vec<Vec<Vec<u8>>>> {
    let f = Fq::new(q)?;
    let total = (q as usize).pow((d * d) as u32);
    let mut out = Vec::new();
    for code in 0..total {
        let mut c = code;
        let g: Vec<Vec<u8>> = (0..d)
            .map(|_| {
                (0..d)
                    .map(|_| {
                        let x = (c % q as usize) as u8;
                        c /= q as usize;
                        x
                    })
                    .collect()
            })
            .collect();
        if rref(f, g.clone(), d).len() == d {
            out.push(g);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian(d: u32, k: u32, q: u128) -> u128 {
        let mut num = 1u128;
        let mut den = 1u128;
        for i in 0..k {
            num *= q.pow(d - i) - 1;
            den *= q.pow(i + 1) - 1;
        }
        num / den
    }

    #[test]
    fn subspace_counts_are_gaussian_binomials() {
        assert_eq!(enumerate_subspaces(2, 1, 2).unwrap().len(), 3);
        assert_eq!(enumerate_subspaces(3, 1, 3).unwrap().len(), 13);
        let z = enumerate_subspaces(2, 0, 5).unwrap();
        assert_eq!(z, vec![Subspace::zero(5, 2)]);
        for q in [2u64, 3] {
            for d in 0..=4 {
                for k in 0..=d {
                    let all = enumerate_subspaces(d, k, q).unwrap();
                    assert_eq!(all.len() as u128, gaussian(d as u32, k as u32, q as u128));
                    let mut sorted = all.clone();
                    sorted.sort();
                    sorted.dedup();
                    assert_eq!(sorted.len(), all.len());
                    for s in &all {
                        // already canonical
                        assert_eq!(
                            &Subspace::from_vectors(q, d, s.basis().to_vec()).unwrap(),
                            s
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn sum_and_intersection() {
        let a = Subspace::from_vectors(2, 2, vec![vec![1, 0]]).unwrap();
        let b = Subspace::from_vectors(2, 2, vec![vec![1, 1]]).unwrap();
        assert_eq!(a.sum(&a).unwrap(), a);
        assert_eq!(a.intersection(&a).unwrap(), a);
        assert_eq!(a.sum(&b).unwrap(), Subspace::full(2, 2));
        assert_eq!(a.intersection(&b).unwrap(), Subspace::zero(2, 2));
        let c = Subspace::zero(2, 3);
        assert!(a.sum(&c).is_err());
    }

    #[test]
    fn dimension_formula_exhaustive() {
        let all: Vec<Subspace> = (0..=3)
            .flat_map(|k| enumerate_subspaces(3, k, 2).unwrap())
            .collect();
        for a in &all {
            for b in &all {
                let s = a.sum(b).unwrap();
                let i = a.intersection(b).unwrap();
                assert_eq!(s.dim() + i.dim(), a.dim() + b.dim());
                assert!(s.contains(a) && s.contains(b));
                assert!(a.contains(&i) && b.contains(&i));
            }
        }
    }

    #[test]
    fn quotient_round_trip() {
        let line = Subspace::from_vectors(3, 2, vec![vec![1, 2]]).unwrap();
        let img = line.quotient_image(&line).unwrap();
        assert_eq!(img.ambient(), 1);
        assert_eq!(img.dim(), 0);
        let by = Subspace::from_vectors(3, 3, vec![vec![1, 1, 0]]).unwrap();
        for w in enumerate_subspaces(3, 2, 3).unwrap() {
            let up = w.sum(&by).unwrap();
            let down = up.quotient_image(&by).unwrap();
            assert_eq!(Subspace::lift_from_quotient(&down, &by).unwrap(), up);
        }
    }

    #[test]
    fn group_orders() {
        assert_eq!(general_linear_group(1, 3).unwrap().len(), 2);
        assert_eq!(general_linear_group(2, 2).unwrap().len(), 6);
        assert_eq!(general_linear_group(2, 3).unwrap().len(), 48);
    }

    #[test]
    fn field_inverses() {
        for q in [2u64, 3, 5, 7] {
            let f = Fq::new(q).unwrap();
            for a in 1..q as u8 {
                assert_eq!(f.mul(a, f.inv(a)), 1);
            }
        }
        assert!(Fq::new(4).is_err());
    }
}
