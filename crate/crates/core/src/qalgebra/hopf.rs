//! Coproduct, counit, quantum determinants and minors, and the antipode of
//! the localized FRT algebra.

use std::collections::BTreeMap;
use std::fmt;

use super::{GeneratorIndex, Kind, NCPoly, Word};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// An element of `A ⊗ A`, both legs in normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tensor {
    kind: Kind,
    n: usize,
    terms: BTreeMap<(Word, Word), Scalar>,
}

/// An element of `A ⊗ A ⊗ A`.
pub type Tensor3 = BTreeMap<(Word, Word, Word), Scalar>;

fn add_to<K: Ord>(map: &mut BTreeMap<K, Scalar>, key: K, c: Scalar) {
    if c.is_zero() {
        return;
    }
    let entry = map.entry(key).or_default();
    *entry += &c;
}

fn prune<K: Ord>(map: &mut BTreeMap<K, Scalar>) {
    map.retain(|_, c| !c.is_zero());
}

impl Tensor {
    pub fn zero(kind: Kind, n: usize) -> Self {
        Self {
            kind,
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn unit(kind: Kind, n: usize) -> Self {
        let mut t = Self::zero(kind, n);
        t.terms
            .insert((Word::empty(), Word::empty()), Scalar::one());
        t
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Word, Word), &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, left: &Word, right: &Word) -> Scalar {
        self.terms
            .get(&(left.clone(), right.clone()))
            .cloned()
            .unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `sum c * (x ⊗ y)` with both legs normalized.
    pub fn from_pairs(
        kind: Kind,
        n: usize,
        pairs: impl IntoIterator<Item = (Word, Word, Scalar)>,
    ) -> Self {
        let mut out = Self::zero(kind, n);
        for (l, r, c) in pairs {
            let left = NCPoly::from_word(kind, n, l, Scalar::one()).normal_form();
            let right = NCPoly::from_word(kind, n, r, Scalar::one()).normal_form();
            for (lw, lc) in left.terms() {
                for (rw, rc) in right.terms() {
                    add_to(&mut out.terms, (lw.clone(), rw.clone()), &(&c * lc) * rc);
                }
            }
        }
        prune(&mut out.terms);
        out
    }

    /// Legwise product `(a ⊗ b)(c ⊗ d) = ac ⊗ bd`.
    pub fn multiply(&self, other: &Tensor) -> Tensor {
        let pairs = self.terms.iter().flat_map(|((a, b), x)| {
            other
                .terms
                .iter()
                .map(move |((c, d), y)| (a.concat(c), b.concat(d), x * y))
        });
        Tensor::from_pairs(self.kind, self.n, pairs)
    }

    /// `(Δ ⊗ id)`.
    pub fn comultiply_left(&self) -> Tensor3 {
        let mut out = Tensor3::new();
        for ((a, b), c) in &self.terms {
            let da = comultiply_word(self.kind, self.n, a);
            for ((x, y), d) in &da.terms {
                add_to(&mut out, (x.clone(), y.clone(), b.clone()), c * d);
            }
        }
        prune(&mut out);
        out
    }

    /// `(id ⊗ Δ)`.
    pub fn comultiply_right(&self) -> Tensor3 {
        let mut out = Tensor3::new();
        for ((a, b), c) in &self.terms {
            let db = comultiply_word(self.kind, self.n, b);
            for ((x, y), d) in &db.terms {
                add_to(&mut out, (a.clone(), x.clone(), y.clone()), c * d);
            }
        }
        prune(&mut out);
        out
    }

    /// `(ε ⊗ id)`.
    pub fn counit_left(&self) -> NCPoly {
        NCPoly::from_terms(
            self.kind,
            self.n,
            self.terms
                .iter()
                .map(|((a, b), c)| (b.clone(), c * &counit_word(a))),
        )
    }

    /// `(id ⊗ ε)`.
    pub fn counit_right(&self) -> NCPoly {
        NCPoly::from_terms(
            self.kind,
            self.n,
            self.terms
                .iter()
                .map(|((a, b), c)| (a.clone(), c * &counit_word(b))),
        )
    }
}

fn counit_word(w: &Word) -> Scalar {
    if w.letters().iter().all(|g| g.row == g.col) {
        Scalar::one()
    } else {
        Scalar::zero()
    }
}

fn comultiply_word(kind: Kind, n: usize, w: &Word) -> Tensor {
    // Expand prod_t sum_k E_{i_t k} ⊗ E_{k j_t} and normalize each leg once.
    let mut raw: Vec<(Vec<GeneratorIndex>, Vec<GeneratorIndex>)> = vec![(Vec::new(), Vec::new())];
    for g in w.letters() {
        let mut next = Vec::with_capacity(raw.len() * n);
        for (l, r) in &raw {
            for k in 1..=n {
                let mut l2 = l.clone();
                let mut r2 = r.clone();
                l2.push(GeneratorIndex::new(g.row(), k));
                r2.push(GeneratorIndex::new(k, g.col()));
                next.push((l2, r2));
            }
        }
        raw = next;
    }
    Tensor::from_pairs(
        kind,
        n,
        raw.into_iter()
            .map(|(l, r)| (Word(l), Word(r), Scalar::one())),
    )
}

impl NCPoly {
    /// `Δ(E_ij) = sum_k E_ik ⊗ E_kj`, extended multiplicatively.
    pub fn comultiply(&self) -> Tensor {
        let mut out = Tensor::zero(self.kind(), self.n());
        for (w, c) in self.terms() {
            for ((l, r), d) in comultiply_word(self.kind(), self.n(), w).terms {
                add_to(&mut out.terms, (l, r), c * &d);
            }
        }
        prune(&mut out.terms);
        out
    }

    /// `ε(E_ij) = δ_ij`, extended multiplicatively.
    pub fn counit(&self) -> Scalar {
        let mut total = Scalar::zero();
        for (w, c) in self.terms() {
            total += &(c * &counit_word(w));
        }
        total
    }

    /// Both at once, as a pair.
    pub fn comultiply_counit(&self) -> (Tensor, Scalar) {
        (self.comultiply(), self.counit())
    }
}

/// Permutations of `0..m` with their inversion counts.
pub(crate) fn permutations_with_length(m: usize) -> Vec<(Vec<usize>, usize)> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for k in 0..used.len() {
            if !used[k] {
                used[k] = true;
                prefix.push(k);
                rec(prefix, used, out);
                prefix.pop();
                used[k] = false;
            }
        }
    }
    let mut perms = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; m], &mut perms);
    perms
        .into_iter()
        .map(|p| {
            let inv = (0..m)
                .flat_map(|a| (a + 1..m).map(move |b| (a, b)))
                .filter(|&(a, b)| p[a] > p[b])
                .count();
            (p, inv)
        })
        .collect()
}

/// Quantum determinant of the sub-presentation on `rows` × `cols`.
fn determinant_on(kind: Kind, n: usize, rows: &[usize], cols: &[usize]) -> NCPoly {
    let m = rows.len();
    let mut out = NCPoly::zero(kind, n);
    for (sigma, len) in permutations_with_length(m) {
        let letters: Vec<GeneratorIndex> = match kind {
            // E_{1,σ(1)} ... E_{m,σ(m)}
            Kind::Frt => (0..m)
                .map(|t| GeneratorIndex::new(rows[t], cols[sigma[t]]))
                .collect(),
            // c_{σ(1),1} ... c_{σ(m),m}
            Kind::Dd => (0..m)
                .map(|t| GeneratorIndex::new(rows[sigma[t]], cols[t]))
                .collect(),
        };
        out.add_term(Word(letters), Scalar::neg_v_pow(-(len as i64)));
    }
    out.normal_form()
}

/// The quantum determinant, or with `omit = Some((i, j))` the minor `A(i, j)`
/// on rows `≠ i` and columns `≠ j`.
pub fn quantum_determinant_minor(
    kind: Kind,
    n: usize,
    omit: Option<(usize, usize)>,
) -> Result<NCPoly> {
    if n == 0 {
        return Err(Error::Domain("n must be positive".into()));
    }
    match omit {
        None => {
            let all: Vec<usize> = (1..=n).collect();
            Ok(determinant_on(kind, n, &all, &all))
        }
        Some((i, j)) => {
            if n < 2 {
                return Err(Error::Domain("minors need n >= 2".into()));
            }
            GeneratorIndex::checked(i, j, n)?;
            let rows: Vec<usize> = (1..=n).filter(|&r| r != i).collect();
            let cols: Vec<usize> = (1..=n).filter(|&c| c != j).collect();
            Ok(determinant_on(kind, n, &rows, &cols))
        }
    }
}

pub fn determinant(kind: Kind, n: usize) -> NCPoly {
    quantum_determinant_minor(kind, n, None).expect("n > 0")
}

pub fn minor(kind: Kind, n: usize, i: usize, j: usize) -> Result<NCPoly> {
    quantum_determinant_minor(kind, n, Some((i, j)))
}

/// `sum_k p_k det^{-k}` in the FRT algebra localized at its (central)
/// determinant.
#[derive(Clone, Debug)]
pub struct LocalizedElement {
    kind: Kind,
    n: usize,
    parts: BTreeMap<u32, NCPoly>,
}

impl fmt::Display for LocalizedElement {
    /// `p0 + (p1)*detinv + (p2)*detinv^2 + ...`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, p) in &self.parts {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{p}")?,
                1 => write!(f, "({p})*detinv")?,
                _ => write!(f, "({p})*detinv^{k}")?,
            }
        }
        Ok(())
    }
}

impl LocalizedElement {
    pub fn zero(kind: Kind, n: usize) -> Self {
        Self {
            kind,
            n,
            parts: BTreeMap::new(),
        }
    }

    pub fn from_poly(p: NCPoly) -> Self {
        Self::with_det_power(p, 0)
    }

    /// `p * det^{-k}`.
    pub fn with_det_power(p: NCPoly, k: u32) -> Self {
        let mut out = Self::zero(p.kind(), p.n());
        if !p.is_zero() {
            out.parts.insert(k, p.normal_form());
        }
        out
    }

    pub fn one(kind: Kind, n: usize) -> Self {
        Self::from_poly(NCPoly::one(kind, n))
    }

    pub fn det_inverse(kind: Kind, n: usize) -> Self {
        Self::with_det_power(NCPoly::one(kind, n), 1)
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn parts(&self) -> impl Iterator<Item = (u32, &NCPoly)> {
        self.parts.iter().map(|(k, p)| (*k, p))
    }

    pub fn is_zero(&self) -> bool {
        self.numerator_at(self.max_power()).is_zero()
    }

    fn max_power(&self) -> u32 {
        self.parts.keys().next_back().copied().unwrap_or(0)
    }

    /// `sum_k p_k det^{top - k}`, the numerator over `det^{top}`.
    pub fn numerator_at(&self, top: u32) -> NCPoly {
        let det = determinant(self.kind, self.n);
        let mut out = NCPoly::zero(self.kind, self.n);
        for (k, p) in &self.parts {
            assert!(*k <= top);
            let term = p.multiply(&det.pow(top - k)).expect("same algebra");
            out = out.add(&term).expect("same algebra");
        }
        out
    }

    pub fn add(&self, other: &LocalizedElement) -> Result<LocalizedElement> {
        if self.kind != other.kind || self.n != other.n {
            return Err(Error::Mismatch(
                "localized elements of different algebras".into(),
            ));
        }
        let mut out = self.clone();
        for (k, p) in &other.parts {
            let merged = match out.parts.get(k) {
                Some(existing) => existing.add(p)?,
                None => p.clone(),
            };
            if merged.is_zero() {
                out.parts.remove(k);
            } else {
                out.parts.insert(*k, merged);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, s: &Scalar) -> LocalizedElement {
        let mut out = LocalizedElement::zero(self.kind, self.n);
        for (k, p) in &self.parts {
            let sp = p.scale(s);
            if !sp.is_zero() {
                out.parts.insert(*k, sp);
            }
        }
        out
    }

    /// Product using centrality of the FRT determinant.
    pub fn multiply(&self, other: &LocalizedElement) -> Result<LocalizedElement> {
        if self.kind != Kind::Frt || other.kind != Kind::Frt {
            return Err(Error::Unsupported(
                "localized products are only available in the FRT algebra; \
                 transport Dipper-Donkin elements through Xi"
                    .into(),
            ));
        }
        if self.n != other.n {
            return Err(Error::Mismatch("different n".into()));
        }
        let mut out = LocalizedElement::zero(self.kind, self.n);
        for (a, p) in &self.parts {
            for (b, r) in &other.parts {
                out = out.add(&LocalizedElement::with_det_power(p.multiply(r)?, a + b))?;
            }
        }
        Ok(out)
    }
}

impl PartialEq for LocalizedElement {
    fn eq(&self, other: &Self) -> bool {
        if self.kind != other.kind || self.n != other.n {
            return false;
        }
        let top = self.max_power().max(other.max_power());
        self.numerator_at(top) == other.numerator_at(top)
    }
}

/// `S(E_ij) = (-v)^{j-i} A(j, i) det^{-1}` in the localized FRT algebra.
pub fn antipode_generator(kind: Kind, n: usize, i: usize, j: usize) -> Result<LocalizedElement> {
    GeneratorIndex::checked(i, j, n)?;
    if kind == Kind::Dd {
        return Err(Error::Unsupported(
            "the Dipper-Donkin antipode is available through the Xi transport \
             (transported_dd_antipode)"
                .into(),
        ));
    }
    let cofactor = if n == 1 {
        NCPoly::one(kind, n)
    } else {
        minor(kind, n, j, i)?
    };
    let coeff = Scalar::neg_v_pow(j as i64 - i as i64);
    Ok(LocalizedElement::with_det_power(cofactor.scale(&coeff), 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word(letters: &[(usize, usize)]) -> Word {
        Word(
            letters
                .iter()
                .map(|&(i, j)| GeneratorIndex::new(i, j))
                .collect(),
        )
    }

    fn e(n: usize, i: usize, j: usize) -> NCPoly {
        NCPoly::generator(Kind::Frt, n, i, j).unwrap()
    }

    #[test]
    fn coproduct_of_generator() {
        let d = e(2, 1, 1).comultiply();
        assert_eq!(d.len(), 2);
        assert_eq!(d.coeff(&word(&[(1, 1)]), &word(&[(1, 1)])), Scalar::one());
        assert_eq!(d.coeff(&word(&[(1, 2)]), &word(&[(2, 1)])), Scalar::one());
        assert_eq!(
            NCPoly::one(Kind::Frt, 2).comultiply(),
            Tensor::unit(Kind::Frt, 2)
        );
    }

    #[test]
    fn counit_values() {
        assert_eq!(e(2, 1, 2).counit(), Scalar::zero());
        assert_eq!(e(2, 1, 1).counit(), Scalar::one());
    }

    #[test]
    fn determinant_n2_and_n1() {
        let d = determinant(Kind::Frt, 2);
        assert_eq!(d.len(), 2);
        assert_eq!(d.coeff(&word(&[(1, 1), (2, 2)])), Scalar::one());
        assert_eq!(d.coeff(&word(&[(1, 2), (2, 1)])), -Scalar::v_pow(-1));
        assert_eq!(determinant(Kind::Frt, 1), e(1, 1, 1));
        assert_eq!(minor(Kind::Frt, 2, 1, 1).unwrap(), e(2, 2, 2));
        assert!(minor(Kind::Frt, 1, 1, 1).is_err());
        assert!(minor(Kind::Frt, 2, 3, 1).is_err());
    }

    #[test]
    fn dd_determinant_normal_form_n2() {
        // c11 c22 - v^-1 c21 c12 = c11 c22 - c12 c21
        let d = determinant(Kind::Dd, 2);
        assert_eq!(d.coeff(&word(&[(1, 1), (2, 2)])), Scalar::one());
        assert_eq!(d.coeff(&word(&[(1, 2), (2, 1)])), Scalar::from_int(-1));
    }

    #[test]
    fn antipode_examples() {
        let s11 = antipode_generator(Kind::Frt, 2, 1, 1).unwrap();
        assert_eq!(s11, LocalizedElement::with_det_power(e(2, 2, 2), 1));
        let s12 = antipode_generator(Kind::Frt, 2, 1, 2).unwrap();
        let expected = LocalizedElement::with_det_power(e(2, 1, 2).scale(&-Scalar::v()), 1);
        assert_eq!(s12, expected);
        let s = antipode_generator(Kind::Frt, 1, 1, 1).unwrap();
        assert_eq!(s, LocalizedElement::det_inverse(Kind::Frt, 1));
        assert!(matches!(
            antipode_generator(Kind::Dd, 2, 1, 1),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn localized_equality_clears_determinants() {
        let det = determinant(Kind::Frt, 2);
        let a = LocalizedElement::with_det_power(det, 1);
        assert_eq!(a, LocalizedElement::one(Kind::Frt, 2));
    }

    #[test]
    fn permutation_lengths() {
        let perms = permutations_with_length(3);
        assert_eq!(perms.len(), 6);
        let total: usize = perms.iter().map(|(_, l)| l).sum();
        assert_eq!(total, 9);
    }
}
