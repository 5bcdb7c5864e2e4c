//! Finite geometry over `F_q`: flags, double-flag orbits and the counting
//! constants `c`, `h`, `g`, `a` behind the convolution products.

mod flag;
mod matrix;
mod subspace;

pub use flag::{enumerate_flags, orbit_type, representative, Flag, FlagPair};
pub use matrix::{CompositionType, MatrixType};
pub use subspace::{enumerate_subspaces, general_linear_group, Fq, Subspace};

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use crate::cache::{CacheKey, ConstantCache, ConstantKind};
use crate::error::{Error, Result};
use flag::chain_orbit_type;

/// Enumeration limits; counts grow like `q^{d^2}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Guards {
    pub max_d: u32,
    pub max_q: u64,
}

impl Default for Guards {
    fn default() -> Self {
        Self { max_d: 6, max_q: 7 }
    }
}

/// `|GL(d, F_q)| = Π_{k<d} (q^d - q^k)`.
pub fn gl_order(d: u32, q: u64) -> u128 {
    let q = q as u128;
    (0..d).map(|k| q.pow(d) - q.pow(k)).product()
}

/// Number of flags of the given type: a Gaussian multinomial.
pub fn flag_count(t: &CompositionType, q: u64) -> u128 {
    // |GL(d)| / |P| computed as a product of Gaussian binomials
    let q = q as u128;
    let mut total = 1u128;
    let mut filled = 0u32;
    let d = t.d();
    for &a in t.parts() {
        let rest = d - filled;
        let mut num = 1u128;
        let mut den = 1u128;
        for i in 0..a {
            num *= q.pow(rest - i) - 1;
            den *= q.pow(i + 1) - 1;
        }
        total *= num / den;
        filled += a;
    }
    total
}

/// Twist exponents (in powers of `v^{-1}`) attached to an ordered pair of
/// factors, left factor `M''` and right factor `M'`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TwistExponents {
    /// `Σ_{i<j} (c'_i c''_j + d'_i d''_j) + d'd''`
    pub circ: i64,
    /// `Σ_{i<j} (-c'_i c''_j + d'_i d''_j)`
    pub dot: i64,
    /// `dot + 3 d'd''`
    pub multh: i64,
}

pub fn twist_exponents(left: &MatrixType, right: &MatrixType) -> TwistExponents {
    let (c2, d2) = (left.ro(), left.co());
    let (c1, d1) = (right.ro(), right.co());
    let n = left.n();
    let mut rows = 0i64;
    let mut cols = 0i64;
    for i in 0..n {
        for j in i + 1..n {
            rows += c1.parts()[i] as i64 * c2.parts()[j] as i64;
            cols += d1.parts()[i] as i64 * d2.parts()[j] as i64;
        }
    }
    let dd = left.d() as i64 * right.d() as i64;
    TwistExponents {
        circ: rows + cols + dd,
        dot: cols - rows,
        multh: cols - rows + 3 * dd,
    }
}

/// Counting engine at a fixed prime `q`, memoized through a shared cache.
pub struct FlagGeometry {
    q: u64,
    guards: Guards,
    cache: Arc<ConstantCache>,
    enumerated: AtomicU64,
}

impl FlagGeometry {
    pub fn new(q: u64) -> Result<Self> {
        Self::with_cache(q, Arc::new(ConstantCache::in_memory()))
    }

    pub fn with_cache(q: u64, cache: Arc<ConstantCache>) -> Result<Self> {
        Self::with_options(q, Guards::default(), cache)
    }

    pub fn with_options(q: u64, guards: Guards, cache: Arc<ConstantCache>) -> Result<Self> {
        Fq::new(q)?;
        if q > guards.max_q {
            return Err(Error::SizeGuard(format!(
                "q = {q} exceeds the limit {}",
                guards.max_q
            )));
        }
        Ok(Self {
            q,
            guards,
            cache,
            enumerated: AtomicU64::new(0),
        })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn guards(&self) -> Guards {
        self.guards
    }

    pub fn cache(&self) -> &Arc<ConstantCache> {
        &self.cache
    }

    /// Geometric objects (flags or subspaces) visited so far.
    pub fn enumerations(&self) -> u64 {
        self.enumerated.load(Ordering::Relaxed)
    }

    fn guard(&self, d: u32) -> Result<()> {
        if d > self.guards.max_d {
            return Err(Error::SizeGuard(format!(
                "degree {d} exceeds the limit {}",
                self.guards.max_d
            )));
        }
        Ok(())
    }

    fn same_n(&self, ms: &[&MatrixType]) -> Result<usize> {
        let n = ms[0].n();
        if ms.iter().any(|m| m.n() != n) {
            return Err(Error::Mismatch("matrix types of different sizes".into()));
        }
        Ok(n)
    }

    fn key(&self, kind: ConstantKind, matrices: Vec<MatrixType>) -> CacheKey {
        CacheKey {
            kind,
            q: self.q,
            n: matrices[0].n(),
            matrices,
        }
    }

    fn cached_group(
        &self,
        kind: ConstantKind,
        candidates: &[Vec<MatrixType>],
    ) -> Option<BTreeMap<Vec<MatrixType>, u128>> {
        let mut out = BTreeMap::new();
        for c in candidates {
            out.insert(c.clone(), self.cache.get(&self.key(kind, c.clone()))?);
        }
        Some(out)
    }

    fn store_group(
        &self,
        kind: ConstantKind,
        group: &BTreeMap<Vec<MatrixType>, u128>,
    ) -> Result<()> {
        self.cache.insert_all(
            group
                .iter()
                .map(|(ms, v)| (self.key(kind, ms.clone()), *v))
                .collect(),
        )
    }

    /// All `c^L_{M,N}`, keyed by `[L, M, N]`, zeros included.
    fn c_group(&self, l: &MatrixType) -> Result<BTreeMap<Vec<MatrixType>, u128>> {
        self.guard(l.d())?;
        let n = l.n();
        let types = CompositionType::all(n, l.d());
        let mut candidates = Vec::new();
        for t in &types {
            for m in MatrixType::with_margins(&l.ro(), t) {
                for nn in MatrixType::with_margins(t, &l.co()) {
                    candidates.push(vec![l.clone(), m.clone(), nn]);
                }
            }
        }
        if let Some(g) = self.cached_group(ConstantKind::C, &candidates) {
            return Ok(g);
        }
        let base = representative(l, self.q)?;
        let mut group: BTreeMap<Vec<MatrixType>, u128> =
            candidates.into_iter().map(|c| (c, 0)).collect();
        for t in &types {
            for mid in enumerate_flags(t, self.q)? {
                self.enumerated.fetch_add(1, Ordering::Relaxed);
                let m = chain_orbit_type(base.v.steps(), mid.steps());
                let nn = chain_orbit_type(mid.steps(), base.f.steps());
                *group.get_mut(&vec![l.clone(), m, nn]).expect("candidate") += 1;
            }
        }
        self.store_group(ConstantKind::C, &group)?;
        Ok(group)
    }

    /// `c^L_{M,N} = #{F̃ : (V, F̃) ∈ O_M, (F̃, F) ∈ O_N}` for `(V, F) ∈ O_L`.
    pub fn structure_c(&self, l: &MatrixType, m: &MatrixType, nn: &MatrixType) -> Result<u128> {
        self.same_n(&[l, m, nn])?;
        if l.ro() != m.ro() || l.co() != nn.co() || m.co() != nn.ro() {
            return Ok(0);
        }
        Ok(self.c_group(l)?[&vec![l.clone(), m.clone(), nn.clone()]])
    }

    /// Nonzero `c^L_{M,N}` as `(M, N, count)`.
    pub fn coproduct_terms(&self, l: &MatrixType) -> Result<Vec<(MatrixType, MatrixType, u128)>> {
        Ok(self
            .c_group(l)?
            .into_iter()
            .filter(|(_, v)| *v != 0)
            .map(|(k, v)| (k[1].clone(), k[2].clone(), v))
            .collect())
    }

    /// `c^L_{M,N}` counted from an explicit point of `O_L`, uncached.
    pub fn count_c_at(&self, base: &FlagPair, m: &MatrixType, nn: &MatrixType) -> Result<u128> {
        let mut count = 0;
        for mid in enumerate_flags(&m.co(), self.q)? {
            if chain_orbit_type(base.v.steps(), mid.steps()) == *m
                && chain_orbit_type(mid.steps(), base.f.steps()) == *nn
            {
                count += 1;
            }
        }
        Ok(count)
    }

    /// All `g^M_{M'',M'}` for fixed `M`, keyed by `[M, M'', M']`.
    fn g_group(&self, m: &MatrixType) -> Result<BTreeMap<Vec<MatrixType>, u128>> {
        self.guard(m.d())?;
        let (ro, co) = (m.ro(), m.co());
        let mut candidates = Vec::new();
        for k in 0..=m.d() {
            for r2 in ro.sub_compositions(k) {
                for c2 in co.sub_compositions(k) {
                    let r1 = ro.checked_sub(&r2).expect("sub-composition");
                    let c1 = co.checked_sub(&c2).expect("sub-composition");
                    for m2 in MatrixType::with_margins(&r2, &c2) {
                        for m1 in MatrixType::with_margins(&r1, &c1) {
                            candidates.push(vec![m.clone(), m2.clone(), m1]);
                        }
                    }
                }
            }
        }
        if let Some(g) = self.cached_group(ConstantKind::G, &candidates) {
            return Ok(g);
        }
        let base = representative(m, self.q)?;
        let mut group: BTreeMap<Vec<MatrixType>, u128> =
            candidates.into_iter().map(|c| (c, 0)).collect();
        for (m2, m1) in self.split_counts(&base)? {
            *group.get_mut(&vec![m.clone(), m2, m1]).expect("candidate") += 1;
        }
        self.store_group(ConstantKind::G, &group)?;
        Ok(group)
    }

    /// `(type((V,F) ∩ E), type((V,F) / E))` for every subspace `E`.
    fn split_counts(&self, base: &FlagPair) -> Result<Vec<(MatrixType, MatrixType)>> {
        let d = base.v.ambient();
        let mut out = Vec::new();
        for k in 0..=d {
            for e in enumerate_subspaces(d, k, self.q)? {
                self.enumerated.fetch_add(1, Ordering::Relaxed);
                let meet = |c: &[Subspace]| -> Vec<Subspace> {
                    c.iter().map(|s| s.intersection_unchecked(&e)).collect()
                };
                let join = |c: &[Subspace]| -> Vec<Subspace> {
                    c.iter().map(|s| s.sum_unchecked(&e)).collect()
                };
                let sub = chain_orbit_type(&meet(base.v.steps()), &meet(base.f.steps()));
                let quo = chain_orbit_type(&join(base.v.steps()), &join(base.f.steps()));
                out.push((sub, quo));
            }
        }
        Ok(out)
    }

    /// `g^M_{M'',M'} = #{E : (V,F) ∩ E ∈ O_{M''}, (V,F) / E ∈ O_{M'}}`.
    pub fn structure_g(&self, m: &MatrixType, m2: &MatrixType, m1: &MatrixType) -> Result<u128> {
        self.same_n(&[m, m2, m1])?;
        if m.ro() != m2.ro().add(&m1.ro()) || m.co() != m2.co().add(&m1.co()) {
            return Ok(0);
        }
        Ok(self.g_group(m)?[&vec![m.clone(), m2.clone(), m1.clone()]])
    }

    /// Nonzero `g^M_{M'',M'}` over all `M`.
    pub fn g_terms(&self, m2: &MatrixType, m1: &MatrixType) -> Result<Vec<(MatrixType, u128)>> {
        self.same_n(&[m2, m1])?;
        let mut out = Vec::new();
        for m in MatrixType::with_margins(&m2.ro().add(&m1.ro()), &m2.co().add(&m1.co())) {
            let v = self.structure_g(&m, m2, m1)?;
            if v != 0 {
                out.push((m, v));
            }
        }
        Ok(out)
    }

    /// `g^M_{M'',M'}` counted from an explicit point of `O_M`, uncached.
    pub fn count_g_at(&self, base: &FlagPair, m2: &MatrixType, m1: &MatrixType) -> Result<u128> {
        Ok(self
            .split_counts(base)?
            .into_iter()
            .filter(|(a, b)| a == m2 && b == m1)
            .count() as u128)
    }

    /// The standard fixture for `h`: `D'' = ` first `d''` coordinates,
    /// `V = V'' ⊕ V'`, and the flags `F''`, `F'` placed in `D''` and `D/D''`.
    fn h_fixture(&self, m2: &MatrixType, m1: &MatrixType) -> Result<HFixture> {
        let d2 = m2.d() as usize;
        let d = d2 + m1.d() as usize;
        let r2 = representative(m2, self.q)?;
        let r1 = representative(m1, self.q)?;
        let v =
            r2.v.steps()
                .iter()
                .zip(r1.v.steps())
                .map(|(a, b)| a.embed(d, 0).sum_unchecked(&b.embed(d, d2)))
                .collect();
        let dsub = Subspace::coordinate(self.q, d, 0..d2);
        let f_sub = r2.f.steps().iter().map(|s| s.embed(d, 0)).collect();
        let f_quo =
            r1.f.steps()
                .iter()
                .map(|s| s.embed(d, d2).sum_unchecked(&dsub))
                .collect();
        Ok(HFixture {
            v,
            dsub,
            f_sub,
            f_quo,
        })
    }

    fn h_counts(&self, fx: &HFixture, co: &CompositionType) -> Result<BTreeMap<MatrixType, u128>> {
        let mut out = BTreeMap::new();
        for f in enumerate_flags(co, self.q)? {
            self.enumerated.fetch_add(1, Ordering::Relaxed);
            let ok = f.steps().iter().enumerate().all(|(j, s)| {
                s.intersection_unchecked(&fx.dsub) == fx.f_sub[j]
                    && s.sum_unchecked(&fx.dsub) == fx.f_quo[j]
            });
            if ok {
                *out.entry(chain_orbit_type(&fx.v, f.steps())).or_insert(0) += 1;
            }
        }
        Ok(out)
    }

    /// All `h^M_{M'',M'}` for a fixed pair, keyed by `[M, M'', M']`.
    fn h_group(&self, m2: &MatrixType, m1: &MatrixType) -> Result<BTreeMap<Vec<MatrixType>, u128>> {
        self.guard(m2.d() + m1.d())?;
        let ro = m2.ro().add(&m1.ro());
        let co = m2.co().add(&m1.co());
        let candidates: Vec<Vec<MatrixType>> = MatrixType::with_margins(&ro, &co)
            .into_iter()
            .map(|m| vec![m, m2.clone(), m1.clone()])
            .collect();
        if let Some(g) = self.cached_group(ConstantKind::H, &candidates) {
            return Ok(g);
        }
        let fx = self.h_fixture(m2, m1)?;
        let counts = self.h_counts(&fx, &co)?;
        let group = candidates
            .into_iter()
            .map(|c| {
                let v = counts.get(&c[0]).copied().unwrap_or(0);
                (c, v)
            })
            .collect();
        self.store_group(ConstantKind::H, &group)?;
        Ok(group)
    }

    /// `h^M_{M'',M'}`: flags `F` with `(V,F) ∈ O_M` restricting to the fixed
    /// sub pair on `D''` and quotient pair on `D/D''`.
    pub fn structure_h(&self, m: &MatrixType, m2: &MatrixType, m1: &MatrixType) -> Result<u128> {
        self.same_n(&[m, m2, m1])?;
        if m.ro() != m2.ro().add(&m1.ro()) || m.co() != m2.co().add(&m1.co()) {
            return Ok(0);
        }
        Ok(self.h_group(m2, m1)?[&vec![m.clone(), m2.clone(), m1.clone()]])
    }

    /// Nonzero `h^M_{M'',M'}` over all `M`.
    pub fn h_terms(&self, m2: &MatrixType, m1: &MatrixType) -> Result<Vec<(MatrixType, u128)>> {
        self.same_n(&[m2, m1])?;
        Ok(self
            .h_group(m2, m1)?
            .into_iter()
            .filter(|(_, v)| *v != 0)
            .map(|(k, v)| (k[0].clone(), v))
            .collect())
    }

    /// `h` recounted after moving `V` by `g`, which must fix `D''` pointwise
    /// and act trivially on `D/D''`; uncached.
    pub fn count_h_with_shear(
        &self,
        m: &MatrixType,
        m2: &MatrixType,
        m1: &MatrixType,
        g: &[Vec<u8>],
    ) -> Result<u128> {
        let mut fx = self.h_fixture(m2, m1)?;
        let d2 = m2.d() as usize;
        let d = fx.dsub.ambient();
        for (i, row) in g.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                let fixed = if j < d2 || i >= d2 { (i == j) as u8 } else { x };
                if x != fixed {
                    return Err(Error::Fixture(format!(
                        "entry ({i},{j}) of the shear does not preserve the splitting of F_q^{d}"
                    )));
                }
            }
        }
        fx.v = fx.v.iter().map(|s| s.transform(g)).collect();
        Ok(self.h_counts(&fx, &m.co())?.get(m).copied().unwrap_or(0))
    }

    /// `|O_M|` for every `M` with the given margins.
    fn orbit_group(
        &self,
        ro: &CompositionType,
        co: &CompositionType,
    ) -> Result<BTreeMap<MatrixType, u128>> {
        let mut out: BTreeMap<MatrixType, u128> = MatrixType::with_margins(ro, co)
            .into_iter()
            .map(|m| (m, 0))
            .collect();
        let Some(first) = out.keys().next().cloned() else {
            return Ok(out);
        };
        let v = representative(&first, self.q)?.v;
        for f in enumerate_flags(co, self.q)? {
            self.enumerated.fetch_add(1, Ordering::Relaxed);
            *out.get_mut(&chain_orbit_type(v.steps(), f.steps()))
                .expect("margins") += 1;
        }
        let transitive = flag_count(ro, self.q);
        for c in out.values_mut() {
            *c *= transitive;
        }
        Ok(out)
    }

    /// `|O_M| = #{(V, F) of orbit type M}`.
    pub fn orbit_size(&self, m: &MatrixType) -> Result<u128> {
        Ok(gl_order(m.d(), self.q) / self.stabilizer_order(m)?)
    }

    /// `a_M = |GL(d)| / |O_M|`.
    pub fn stabilizer_order(&self, m: &MatrixType) -> Result<u128> {
        self.guard(m.d())?;
        let key = self.key(ConstantKind::A, vec![m.clone()]);
        if let Some(a) = self.cache.get(&key) {
            return Ok(a);
        }
        let orbits = self.orbit_group(&m.ro(), &m.co())?;
        let gl = gl_order(m.d(), self.q);
        let entries = orbits
            .iter()
            .map(|(mm, size)| (self.key(ConstantKind::A, vec![mm.clone()]), gl / size))
            .collect();
        self.cache.insert_all(entries)?;
        Ok(gl / orbits[m])
    }
}

struct HFixture {
    v: Vec<Subspace>,
    dsub: Subspace,
    f_sub: Vec<Subspace>,
    f_quo: Vec<Subspace>,
}
