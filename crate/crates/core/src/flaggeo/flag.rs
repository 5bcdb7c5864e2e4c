//! Partial flags, double flags and the orbit invariant.

use super::matrix::{CompositionType, MatrixType};
use super::subspace::{enumerate_subspaces, Subspace};
use crate::error::{Error, Result};

/// `0 = F_0 ⊆ F_1 ⊆ … ⊆ F_n = F_q^d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Flag {
    steps: Vec<Subspace>,
}

impl Flag {
    /// Validate a chain of `n + 1` subspaces from `0` to the ambient space.
    pub fn new(steps: Vec<Subspace>) -> Result<Self> {
        let Some(first) = steps.first() else {
            return Err(Error::Domain("a flag needs at least one step".into()));
        };
        let (q, d) = (first.q(), first.ambient());
        if first.dim() != 0 || steps.last().map(Subspace::dim) != Some(d) {
            return Err(Error::Domain(
                "flag must run from 0 to the ambient space".into(),
            ));
        }
        for w in steps.windows(2) {
            if w[1].q() != q || w[1].ambient() != d || !w[1].contains(&w[0]) {
                return Err(Error::Domain("flag steps must be nested".into()));
            }
        }
        Ok(Self { steps })
    }

    pub(crate) fn from_steps_unchecked(steps: Vec<Subspace>) -> Self {
        Self { steps }
    }

    pub fn n(&self) -> usize {
        self.steps.len() - 1
    }

    pub fn ambient(&self) -> usize {
        self.steps[0].ambient()
    }

    pub fn steps(&self) -> &[Subspace] {
        &self.steps
    }

    /// `(dim F_i / F_{i-1})_i`.
    pub fn flag_type(&self) -> CompositionType {
        CompositionType::new(
            self.steps
                .windows(2)
                .map(|w| (w[1].dim() - w[0].dim()) as u32)
                .collect(),
        )
    }

    pub fn transform(&self, g: &[Vec<u8>]) -> Flag {
        Flag {
            steps: self.steps.iter().map(|s| s.transform(g)).collect(),
        }
    }
}

/// All flags of the given type in `F_q^d`, `d = |type|`.
pub fn enumerate_flags(flag_type: &CompositionType, q: u64) -> Result<Vec<Flag>> {
    let d = flag_type.d() as usize;
    let mut partial = vec![vec![Subspace::zero(q, d)]];
    for &a in flag_type.parts() {
        let mut next = Vec::new();
        for chain in partial {
            let top = chain.last().expect("non-empty");
            let quotient_dim = d - top.dim();
            for w in enumerate_subspaces(quotient_dim, a as usize, q)? {
                let step = Subspace::lift_from_quotient(&w, top)?;
                let mut c = chain.clone();
                c.push(step);
                next.push(c);
            }
        }
        partial = next;
    }
    Ok(partial
        .into_iter()
        .map(Flag::from_steps_unchecked)
        .collect())
}

/// A point `(V, F)` of a double flag variety.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FlagPair {
    pub v: Flag,
    pub f: Flag,
}

impl FlagPair {
    pub fn new(v: Flag, f: Flag) -> Result<Self> {
        if v.ambient() != f.ambient() || v.n() != f.n() || v.steps[0].q() != f.steps[0].q() {
            return Err(Error::Mismatch("flags live in different spaces".into()));
        }
        Ok(Self { v, f })
    }

    pub fn orbit_type(&self) -> MatrixType {
        chain_orbit_type(self.v.steps(), self.f.steps())
    }

    pub fn transform(&self, g: &[Vec<u8>]) -> FlagPair {
        FlagPair {
            v: self.v.transform(g),
            f: self.f.transform(g),
        }
    }
}

/// The orbit invariant of two chains sharing bottom and top:
/// `m_ij = dim(V_{i-1} + V_i ∩ F_j) - dim(V_{i-1} + V_i ∩ F_{j-1})`.
///
/// Only dimensions enter, so chains of a subquotient can be passed as
/// chains in the ambient space (e.g. `V_i ∩ E` or `V_i + E`).
pub(crate) fn chain_orbit_type(v: &[Subspace], f: &[Subspace]) -> MatrixType {
    let n = v.len() - 1;
    let mut rows = vec![vec![0u32; n]; n];
    for i in 1..=n {
        let mut prev = v[i - 1].dim();
        for j in 1..=n {
            let cur = v[i - 1]
                .sum_unchecked(&v[i].intersection_unchecked(&f[j]))
                .dim();
            rows[i - 1][j - 1] = (cur - prev) as u32;
            prev = cur;
        }
    }
    MatrixType::new(rows).expect("square")
}

pub fn orbit_type(pair: &FlagPair) -> MatrixType {
    pair.orbit_type()
}

/// The coordinate pair of type `M`: one basis vector per cell `(i, j, t)`,
/// `t < m_ij`, in lexicographic order; `V_i` spans cells with row `<= i`,
/// `F_j` cells with column `<= j`.
pub fn representative(m: &MatrixType, q: u64) -> Result<FlagPair> {
    crate::flaggeo::subspace::Fq::new(q)?;
    let n = m.n();
    let d = m.d() as usize;
    let mut cells = Vec::with_capacity(d);
    for (i, j, k) in m.cells() {
        for _ in 0..k {
            cells.push((i, j));
        }
    }
    let chain = |pick: &dyn Fn(usize, usize, usize) -> bool| -> Vec<Subspace> {
        (0..=n)
            .map(|s| {
                Subspace::coordinate(
                    q,
                    d,
                    cells
                        .iter()
                        .enumerate()
                        .filter(|(_, &(i, j))| pick(i, j, s))
                        .map(|(idx, _)| idx),
                )
            })
            .collect()
    };
    let v = chain(&|i, _, s| i <= s);
    let f = chain(&|_, j, s| j <= s);
    Ok(FlagPair {
        v: Flag::from_steps_unchecked(v),
        f: Flag::from_steps_unchecked(f),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flag_counts() {
        let c = |p: &[u32]| CompositionType::new(p.to_vec());
        assert_eq!(enumerate_flags(&c(&[1, 1]), 2).unwrap().len(), 3);
        assert_eq!(enumerate_flags(&c(&[2, 0]), 3).unwrap().len(), 1);
        assert_eq!(enumerate_flags(&c(&[1, 1, 1]), 2).unwrap().len(), 21);
        for f in enumerate_flags(&c(&[1, 0, 2]), 3).unwrap() {
            assert_eq!(f.flag_type(), c(&[1, 0, 2]));
            assert!(Flag::new(f.steps().to_vec()).is_ok());
        }
    }

    #[test]
    fn orbit_type_examples() {
        let q = 2;
        let line = |v: Vec<u8>| Subspace::from_vectors(q, 2, vec![v]).unwrap();
        let flag1 = Flag::new(vec![
            Subspace::zero(q, 1),
            Subspace::zero(q, 1),
            Subspace::full(q, 1),
        ])
        .unwrap();
        let p = FlagPair::new(flag1.clone(), flag1).unwrap();
        assert_eq!(p.orbit_type(), MatrixType::unit(2, 2, 2));

        let complete = |l| Flag::new(vec![Subspace::zero(q, 2), l, Subspace::full(q, 2)]).unwrap();
        let a = complete(line(vec![1, 0]));
        let b = complete(line(vec![1, 1]));
        let diag = MatrixType::unit(2, 1, 1).add(&MatrixType::unit(2, 2, 2));
        let anti = MatrixType::unit(2, 1, 2).add(&MatrixType::unit(2, 2, 1));
        assert_eq!(
            FlagPair::new(a.clone(), a.clone()).unwrap().orbit_type(),
            diag
        );
        assert_eq!(FlagPair::new(a, b).unwrap().orbit_type(), anti);
    }

    #[test]
    fn representative_round_trip() {
        for n in 1..=3 {
            for d in 0..=3 {
                for m in MatrixType::theta(n, d) {
                    let p = representative(&m, 2).unwrap();
                    assert_eq!(p.orbit_type(), m);
                    assert_eq!(p.v.flag_type(), m.ro());
                    assert_eq!(p.f.flag_type(), m.co());
                }
            }
        }
    }

    #[test]
    fn anti_diagonal_representative() {
        let anti = MatrixType::unit(2, 1, 2).add(&MatrixType::unit(2, 2, 1));
        let p = representative(&anti, 2).unwrap();
        // cells in order: (1,2), (2,1)
        assert_eq!(p.v.steps()[1], Subspace::coordinate(2, 2, [0]));
        assert_eq!(p.f.steps()[1], Subspace::coordinate(2, 2, [1]));
    }
}
