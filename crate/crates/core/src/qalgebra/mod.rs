//! Symbolic quantum matrix algebras.
//!
//! `Kind::Frt` is the Faddeev-Reshetikhin-Takhtajan algebra `A_v(n)` on
//! generators `E[i,j]`; `Kind::Dd` is the Dipper-Donkin algebra `B_v(n)` on
//! generators `c[i,j]`. Elements are finite sums of words with [`Scalar`]
//! coefficients; [`NCPoly::normal_form`] rewrites them onto the basis of
//! lexicographically non-decreasing words.

mod hopf;
mod pbw;
mod rewrite;
mod twist;

pub(crate) use hopf::permutations_with_length;
pub use hopf::{
    antipode_generator, determinant, minor, quantum_determinant_minor, LocalizedElement, Tensor,
    Tensor3,
};
pub use pbw::{divided_pbw_monomial, pbw_monomial, DividedMonomial};
pub use rewrite::{rewrite_pair, Reduction, Strategy, DEFAULT_STEP_LIMIT};
pub use twist::{
    dd_relations, frt_relations, homogeneous_components, homogeneous_degree, involution,
    transported_dd_antipode, twisted_multiply, twisted_multiply_localized, word_twist_exponent,
    xi_transport, Bicharacter, Involution, MultiDegree, Relation,
};

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Kind {
    /// `A_v(n)`, generators `E[i,j]`.
    #[serde(rename = "FRT")]
    Frt,
    /// `B_v(n)`, generators `c[i,j]`.
    #[serde(rename = "DD")]
    Dd,
}

impl Kind {
    pub fn symbol(self) -> &'static str {
        match self {
            Kind::Frt => "E",
            Kind::Dd => "c",
        }
    }
}

/// A generator `E[row,col]` (or `c[row,col]`), 1-based.
///
/// The derived order is the lexicographic order on `(row, col)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GeneratorIndex {
    pub row: u8,
    pub col: u8,
}

impl GeneratorIndex {
    pub fn new(row: usize, col: usize) -> Self {
        Self {
            row: row as u8,
            col: col as u8,
        }
    }

    pub fn checked(row: usize, col: usize, n: usize) -> Result<Self> {
        if row == 0 || col == 0 || row > n || col > n {
            return Err(Error::IndexOutOfRange { row, col, n });
        }
        Ok(Self::new(row, col))
    }

    pub fn row(self) -> usize {
        self.row as usize
    }

    pub fn col(self) -> usize {
        self.col as usize
    }

    pub fn transpose(self) -> Self {
        Self {
            row: self.col,
            col: self.row,
        }
    }
}

/// A monomial; the empty word is the unit.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<GeneratorIndex>);

impl Word {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn letters(&self) -> &[GeneratorIndex] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Non-decreasing in the lexicographic order, i.e. a PBW monomial.
    pub fn is_ordered(&self) -> bool {
        self.0.windows(2).all(|w| w[0] <= w[1])
    }

    pub fn inversion_positions(&self) -> impl Iterator<Item = usize> + '_ {
        self.0
            .windows(2)
            .enumerate()
            .filter(|(_, w)| w[0] > w[1])
            .map(|(i, _)| i)
    }

    fn render(&self, symbol: &str) -> String {
        if self.0.is_empty() {
            return "1".to_string();
        }
        let mut parts = Vec::new();
        let mut i = 0;
        while i < self.0.len() {
            let g = self.0[i];
            let mut run = 1;
            while i + run < self.0.len() && self.0[i + run] == g {
                run += 1;
            }
            if run == 1 {
                parts.push(format!("{symbol}[{},{}]", g.row, g.col));
            } else {
                parts.push(format!("{symbol}[{},{}]^{run}", g.row, g.col));
            }
            i += run;
        }
        parts.join("*")
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<[u8; 2]> = self.0.iter().map(|g| [g.row, g.col]).collect();
        pairs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let pairs: Vec<[u8; 2]> = Vec::deserialize(d)?;
        Ok(Word(
            pairs
                .into_iter()
                .map(|[row, col]| GeneratorIndex { row, col })
                .collect(),
        ))
    }
}

/// A scalar-weighted sum of words in one of the two algebras.
#[derive(Clone, PartialEq, Eq)]
pub struct NCPoly {
    kind: Kind,
    n: usize,
    terms: BTreeMap<Word, Scalar>,
}

impl NCPoly {
    pub fn zero(kind: Kind, n: usize) -> Self {
        Self {
            kind,
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(kind: Kind, n: usize) -> Self {
        Self::from_word(kind, n, Word::empty(), Scalar::one())
    }

    pub fn scalar(kind: Kind, n: usize, s: Scalar) -> Self {
        Self::from_word(kind, n, Word::empty(), s)
    }

    pub fn generator(kind: Kind, n: usize, row: usize, col: usize) -> Result<Self> {
        let g = GeneratorIndex::checked(row, col, n)?;
        Ok(Self::from_word(kind, n, Word(vec![g]), Scalar::one()))
    }

    pub fn from_word(kind: Kind, n: usize, word: Word, coeff: Scalar) -> Self {
        let mut p = Self::zero(kind, n);
        p.add_term(word, coeff);
        p
    }

    /// Build from arbitrary `(word, coefficient)` pairs, combining repeats.
    pub fn from_terms(
        kind: Kind,
        n: usize,
        terms: impl IntoIterator<Item = (Word, Scalar)>,
    ) -> Self {
        let mut p = Self::zero(kind, n);
        for (w, c) in terms {
            p.add_term(w, c);
        }
        p
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &Word) -> Scalar {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Every word is a PBW monomial.
    pub fn is_normal(&self) -> bool {
        self.terms.keys().all(Word::is_ordered)
    }

    pub(crate) fn add_term(&mut self, w: Word, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub(crate) fn into_terms(self) -> BTreeMap<Word, Scalar> {
        self.terms
    }

    pub(crate) fn check_compatible(&self, other: &NCPoly) -> Result<()> {
        if self.kind != other.kind || self.n != other.n {
            return Err(Error::Mismatch(format!(
                "{:?}(n={}) vs {:?}(n={})",
                self.kind, self.n, other.kind, other.n
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &NCPoly) -> Result<NCPoly> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &NCPoly) -> Result<NCPoly> {
        self.add(&other.scale(&Scalar::from_int(-1)))
    }

    pub fn scale(&self, s: &Scalar) -> NCPoly {
        let mut out = NCPoly::zero(self.kind, self.n);
        for (w, c) in &self.terms {
            out.add_term(w.clone(), c * s);
        }
        out
    }

    /// Concatenation product without rewriting.
    pub fn concat_product(&self, other: &NCPoly) -> Result<NCPoly> {
        self.check_compatible(other)?;
        let mut out = NCPoly::zero(self.kind, self.n);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                out.add_term(a.concat(b), x * y);
            }
        }
        Ok(out)
    }

    /// Product in the algebra, returned in normal form.
    pub fn multiply(&self, other: &NCPoly) -> Result<NCPoly> {
        Ok(self.concat_product(other)?.normal_form())
    }

    pub fn pow(&self, e: u32) -> NCPoly {
        let mut acc = NCPoly::one(self.kind, self.n);
        for _ in 0..e {
            acc = acc.multiply(self).expect("same algebra");
        }
        acc
    }

    /// Rewrite onto the PBW basis with the default leftmost strategy.
    pub fn normal_form(&self) -> NCPoly {
        self.normal_form_with(Strategy::Leftmost, usize::MAX)
            .expect("unbounded reduction cannot exceed its limit")
            .result
    }

    pub fn normal_form_with(&self, strategy: Strategy, step_limit: usize) -> Result<Reduction> {
        rewrite::reduce(self, strategy, step_limit)
    }

    /// Apply a letter map to every word, keeping coefficients.
    pub fn map_letters(&self, f: impl Fn(GeneratorIndex) -> GeneratorIndex) -> NCPoly {
        NCPoly::from_terms(
            self.kind,
            self.n,
            self.terms
                .iter()
                .map(|(w, c)| (Word(w.0.iter().map(|g| f(*g)).collect()), c.clone())),
        )
    }

    /// Reverse every word.
    pub fn reversed(&self) -> NCPoly {
        NCPoly::from_terms(
            self.kind,
            self.n,
            self.terms.iter().map(|(w, c)| {
                let mut v = w.0.clone();
                v.reverse();
                (Word(v), c.clone())
            }),
        )
    }

    pub fn with_kind(&self, kind: Kind) -> NCPoly {
        NCPoly {
            kind,
            n: self.n,
            terms: self.terms.clone(),
        }
    }
}

impl fmt::Debug for NCPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for NCPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let symbol = self.kind.symbol();
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| {
                let body = w.render(symbol);
                if c.is_one() {
                    body
                } else if w.is_empty() {
                    format!("({c})")
                } else {
                    format!("({c})*{body}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    word: Word,
    coeff: Scalar,
}

impl Serialize for NCPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let list: Vec<TermJson> = self
            .terms
            .iter()
            .map(|(w, c)| TermJson {
                word: w.clone(),
                coeff: c.clone(),
            })
            .collect();
        list.serialize(s)
    }
}

impl NCPoly {
    /// Parse the JSON term list produced by `Serialize`.
    pub fn from_json(kind: Kind, n: usize, value: &serde_json::Value) -> Result<NCPoly> {
        let list: Vec<TermJson> = serde_json::from_value(value.clone())?;
        let mut out = NCPoly::zero(kind, n);
        for t in list {
            for g in t.word.letters() {
                GeneratorIndex::checked(g.row(), g.col(), n)?;
            }
            out.add_term(t.word, t.coeff);
        }
        Ok(out)
    }
}
