//! The convolution algebra `K(n)` at a fixed prime `q`: basis `1_M`, the
//! four products, the three coproducts, and the comparison maps from the
//! symbolic algebras.

mod tables;

pub use tables::{circ_tables, dot_tables, ColumnObservation, LinearInQ, TableColumn};

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use serde::Serialize;

use crate::cache::ConstantCache;
use crate::error::{Error, Result};
use crate::flaggeo::{twist_exponents, FlagGeometry, MatrixType};
use crate::qalgebra::{xi_transport, Bicharacter, DividedMonomial, Kind, NCPoly, Word};
use crate::scalar::{evaluate, EvaluatedScalar, Rational, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Product {
    /// `∘`, through `g`-counts with twist `f1 - f2`.
    Circ,
    /// `∘' = v^{d'd''} ∘`.
    CircPrime,
    /// `·`, through `h`-counts with the `dot` twist.
    Dot,
    /// `•`, untwisted `h`-counts.
    Bullet,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coproduct {
    /// `~Δ(1_L) = u^{-3d²} Σ (a_M a_N / a_L) c^L_{M,N} 1_M ⊗ 1_N`.
    Tilde,
    /// `Δ' = u^{3d²} ~Δ`.
    Prime,
    /// `Δ(1_L) = Σ c^L_{M,N} 1_M ⊗ 1_N`.
    Plain,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Model {
    /// FRT algebra into `(K, ∘)`, `E_ij ↦ 1_{e_ij}`.
    Phi,
    /// FRT algebra into `(K, ·)`, `E_ij ↦ 1_{e_ij}`.
    Psi,
    /// Dipper-Donkin algebra at parameter `q` into `(K, •)`, `c_ij ↦ 1_{e_ji}`.
    PsiPrime,
    /// Dipper-Donkin algebra through the twisted transport, then `Psi`.
    Xi,
}

impl Model {
    pub fn source_kind(self) -> Kind {
        match self {
            Model::Phi | Model::Psi => Kind::Frt,
            Model::PsiPrime | Model::Xi => Kind::Dd,
        }
    }
}

/// `Σ x_M 1_M` with coefficients in `Q[u]/(u⁴ - q)`.
#[derive(Clone, PartialEq, Eq)]
pub struct KElement {
    n: usize,
    q: u64,
    terms: BTreeMap<MatrixType, EvaluatedScalar>,
}

impl KElement {
    pub fn zero(n: usize, q: u64) -> Self {
        Self {
            n,
            q,
            terms: BTreeMap::new(),
        }
    }

    /// `1_0`, the unit for every product.
    pub fn unit(n: usize, q: u64) -> Self {
        Self::basis(MatrixType::zero(n), q)
    }

    pub fn basis(m: MatrixType, q: u64) -> Self {
        let mut x = Self::zero(m.n(), q);
        x.terms.insert(m, EvaluatedScalar::one(q));
        x
    }

    pub fn from_terms(
        n: usize,
        q: u64,
        terms: impl IntoIterator<Item = (MatrixType, EvaluatedScalar)>,
    ) -> Self {
        let mut x = Self::zero(n, q);
        for (m, c) in terms {
            x.add_term(m, c);
        }
        x
    }

    fn add_term(&mut self, m: MatrixType, c: EvaluatedScalar) {
        if c.is_zero() {
            return;
        }
        let q = self.q;
        let entry = self
            .terms
            .entry(m)
            .or_insert_with(|| EvaluatedScalar::zero(q));
        *entry += &c;
        self.terms.retain(|_, c| !c.is_zero());
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MatrixType, &EvaluatedScalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &MatrixType) -> EvaluatedScalar {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(|| EvaluatedScalar::zero(self.q))
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

    fn check(&self, other: &KElement) -> Result<()> {
        if self.n != other.n || self.q != other.q {
            return Err(Error::Mismatch(format!(
                "K elements for (n={}, q={}) and (n={}, q={})",
                self.n, self.q, other.n, other.q
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &KElement) -> Result<KElement> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &KElement) -> Result<KElement> {
        self.add(&other.scale(&EvaluatedScalar::from_int(self.q, -1)))
    }

    pub fn scale(&self, s: &EvaluatedScalar) -> KElement {
        KElement::from_terms(
            self.n,
            self.q,
            self.terms.iter().map(|(m, c)| (m.clone(), c * s)),
        )
    }

    pub fn scale_scalar(&self, s: &Scalar) -> Result<KElement> {
        Ok(self.scale(&evaluate(s, self.q)?))
    }

    /// `1_M ↦ 1_{f(M)}`.
    pub fn map_basis(&self, f: impl Fn(&MatrixType) -> MatrixType) -> KElement {
        KElement::from_terms(
            self.n,
            self.q,
            self.terms.iter().map(|(m, c)| (f(m), c.clone())),
        )
    }
}

impl fmt::Debug for KElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for KElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| format!("({c})*1_{m}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Serialize)]
struct KTermJson<'a> {
    matrix: &'a MatrixType,
    coeff: &'a EvaluatedScalar,
}

impl Serialize for KElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let list: Vec<KTermJson> = self
            .terms
            .iter()
            .map(|(matrix, coeff)| KTermJson { matrix, coeff })
            .collect();
        list.serialize(s)
    }
}

/// `Σ x_{M,N} 1_M ⊗ 1_N`.
#[derive(Clone, PartialEq, Eq)]
pub struct KTensor {
    n: usize,
    q: u64,
    terms: BTreeMap<(MatrixType, MatrixType), EvaluatedScalar>,
}

/// Three-fold tensors, for coassociativity.
pub type KTensor3 = BTreeMap<(MatrixType, MatrixType, MatrixType), EvaluatedScalar>;

impl KTensor {
    pub fn zero(n: usize, q: u64) -> Self {
        Self {
            n,
            q,
            terms: BTreeMap::new(),
        }
    }

    pub fn add_term(&mut self, a: MatrixType, b: MatrixType, c: EvaluatedScalar) {
        if c.is_zero() {
            return;
        }
        let q = self.q;
        let entry = self
            .terms
            .entry((a, b))
            .or_insert_with(|| EvaluatedScalar::zero(q));
        *entry += &c;
        self.terms.retain(|_, c| !c.is_zero());
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(MatrixType, MatrixType), &EvaluatedScalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, a: &MatrixType, b: &MatrixType) -> EvaluatedScalar {
        self.terms
            .get(&(a.clone(), b.clone()))
            .cloned()
            .unwrap_or_else(|| EvaluatedScalar::zero(self.q))
    }

    /// `(ε ⊗ id)`.
    pub fn counit_left(&self) -> KElement {
        KElement::from_terms(
            self.n,
            self.q,
            self.terms
                .iter()
                .filter(|((a, _), _)| a.is_diagonal())
                .map(|((_, b), c)| (b.clone(), c.clone())),
        )
    }

    /// `(id ⊗ ε)`.
    pub fn counit_right(&self) -> KElement {
        KElement::from_terms(
            self.n,
            self.q,
            self.terms
                .iter()
                .filter(|((_, b), _)| b.is_diagonal())
                .map(|((a, _), c)| (a.clone(), c.clone())),
        )
    }
}

impl fmt::Debug for KTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((a, b), c)| format!("({c})*1_{a}⊗1_{b}"))
            .collect();
        write!(
            f,
            "{}",
            if parts.is_empty() {
                "0".into()
            } else {
                parts.join(" + ")
            }
        )
    }
}

#[derive(Serialize)]
struct KTensorTermJson<'a> {
    left: &'a MatrixType,
    right: &'a MatrixType,
    coeff: &'a EvaluatedScalar,
}

impl Serialize for KTensor {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let list: Vec<KTensorTermJson> = self
            .terms
            .iter()
            .map(|((left, right), coeff)| KTensorTermJson { left, right, coeff })
            .collect();
        list.serialize(s)
    }
}

/// `ε(1_M) = 1` for diagonal `M`, else 0.
pub fn k_counit(x: &KElement) -> EvaluatedScalar {
    let mut total = EvaluatedScalar::zero(x.q);
    for (m, c) in &x.terms {
        if m.is_diagonal() {
            total += c;
        }
    }
    total
}

/// `Σ_σ (-1)^{l(σ)} 1_σ`.
pub fn determinant_element(n: usize, q: u64) -> KElement {
    let terms = crate::qalgebra::permutations_with_length(n)
        .into_iter()
        .map(|(sigma, len)| {
            let sign = if len % 2 == 0 { 1 } else { -1 };
            (
                MatrixType::permutation(&sigma),
                EvaluatedScalar::from_int(q, sign),
            )
        });
    KElement::from_terms(n, q, terms)
}

type ProductKey = (MatrixType, MatrixType, Product);

/// Products, coproducts and comparison maps at one prime.
pub struct Convolution {
    geo: FlagGeometry,
    products: Mutex<HashMap<ProductKey, KElement>>,
}

impl Convolution {
    pub fn new(q: u64) -> Result<Self> {
        Ok(Self::from_geometry(FlagGeometry::new(q)?))
    }

    pub fn with_cache(q: u64, cache: Arc<ConstantCache>) -> Result<Self> {
        Ok(Self::from_geometry(FlagGeometry::with_cache(q, cache)?))
    }

    pub fn from_geometry(geo: FlagGeometry) -> Self {
        Self {
            geo,
            products: Mutex::new(HashMap::new()),
        }
    }

    pub fn geometry(&self) -> &FlagGeometry {
        &self.geo
    }

    pub fn q(&self) -> u64 {
        self.geo.q()
    }

    fn v_pow(&self, k: i64) -> EvaluatedScalar {
        EvaluatedScalar::v_pow(self.q(), k)
    }

    /// `1_{M''} ⋆ 1_{M'}` for the chosen product; the left factor is `M''`.
    pub fn basis_product(
        &self,
        left: &MatrixType,
        right: &MatrixType,
        kind: Product,
    ) -> Result<KElement> {
        if left.n() != right.n() {
            return Err(Error::Mismatch("matrix types of different sizes".into()));
        }
        let key = (left.clone(), right.clone(), kind);
        if let Some(x) = self.products.lock().expect("product memo").get(&key) {
            return Ok(x.clone());
        }
        let q = self.q();
        let tw = twist_exponents(left, right);
        let dd = left.d() as i64 * right.d() as i64;
        let (counts, shift) = match kind {
            Product::Circ => (self.geo.g_terms(left, right)?, -tw.circ),
            Product::CircPrime => (self.geo.g_terms(left, right)?, -tw.circ + dd),
            Product::Dot => (self.geo.h_terms(left, right)?, -tw.dot),
            Product::Bullet => (self.geo.h_terms(left, right)?, 0),
        };
        let factor = self.v_pow(shift);
        let out = KElement::from_terms(
            left.n(),
            q,
            counts
                .into_iter()
                .map(|(m, c)| (m, factor.scale(&Rational::from_integer((c as i64).into())))),
        );
        self.products
            .lock()
            .expect("product memo")
            .insert(key, out.clone());
        Ok(out)
    }

    pub fn k_multiply(&self, x: &KElement, y: &KElement, kind: Product) -> Result<KElement> {
        x.check(y)?;
        if x.q != self.q() {
            return Err(Error::Mismatch(format!(
                "element at q = {}, algebra at q = {}",
                x.q,
                self.q()
            )));
        }
        let mut out = KElement::zero(x.n, x.q);
        for (a, ca) in &x.terms {
            for (b, cb) in &y.terms {
                let p = self.basis_product(a, b, kind)?;
                let c = ca * cb;
                for (m, cm) in p.terms {
                    out.add_term(m, &cm * &c);
                }
            }
        }
        Ok(out)
    }

    /// Legwise product `(a ⊗ b)(c ⊗ d) = ac ⊗ bd`.
    pub fn tensor_multiply(&self, x: &KTensor, y: &KTensor, kind: Product) -> Result<KTensor> {
        let mut out = KTensor::zero(x.n, x.q);
        for ((a, b), cx) in &x.terms {
            for ((c, d), cy) in &y.terms {
                let left = self.basis_product(a, c, kind)?;
                let right = self.basis_product(b, d, kind)?;
                let k = cx * cy;
                for (m, cm) in &left.terms {
                    for (nn, cn) in &right.terms {
                        out.add_term(m.clone(), nn.clone(), &(cm * cn) * &k);
                    }
                }
            }
        }
        Ok(out)
    }

    fn basis_coproduct(&self, l: &MatrixType, kind: Coproduct) -> Result<KTensor> {
        let q = self.q();
        let mut out = KTensor::zero(l.n(), q);
        let d = l.d() as i64;
        let a_l = match kind {
            Coproduct::Plain => 1,
            _ => self.geo.stabilizer_order(l)?,
        };
        for (m, nn, c) in self.geo.coproduct_terms(l)? {
            let coeff = match kind {
                Coproduct::Plain => EvaluatedScalar::from_int(q, c as i64),
                Coproduct::Prime | Coproduct::Tilde => {
                    let a_m = self.geo.stabilizer_order(&m)?;
                    let a_n = self.geo.stabilizer_order(&nn)?;
                    let r = big_ratio(a_m * a_n * c, a_l);
                    let base = EvaluatedScalar::from_rational(q, r);
                    if kind == Coproduct::Tilde {
                        &base * &EvaluatedScalar::u_pow(q, -3 * d * d)
                    } else {
                        base
                    }
                }
            };
            out.add_term(m, nn, coeff);
        }
        Ok(out)
    }

    pub fn k_comultiply(&self, x: &KElement, kind: Coproduct) -> Result<KTensor> {
        let mut out = KTensor::zero(x.n, x.q);
        for (l, c) in &x.terms {
            for ((a, b), d) in self.basis_coproduct(l, kind)?.terms {
                out.add_term(a, b, &d * c);
            }
        }
        Ok(out)
    }

    /// `(Δ ⊗ id) t`.
    pub fn comultiply_left(&self, t: &KTensor, kind: Coproduct) -> Result<KTensor3> {
        let mut out = KTensor3::new();
        for ((a, b), c) in &t.terms {
            for ((x, y), d) in self.basis_coproduct(a, kind)?.terms {
                add3(&mut out, (x, y, b.clone()), &d * c, t.q);
            }
        }
        Ok(out)
    }

    /// `(id ⊗ Δ) t`.
    pub fn comultiply_right(&self, t: &KTensor, kind: Coproduct) -> Result<KTensor3> {
        let mut out = KTensor3::new();
        for ((a, b), c) in &t.terms {
            for ((x, y), d) in self.basis_coproduct(b, kind)?.terms {
                add3(&mut out, (a.clone(), x, y), &d * c, t.q);
            }
        }
        Ok(out)
    }

    fn product_for(model: Model) -> Product {
        match model {
            Model::Phi => Product::Circ,
            Model::Psi | Model::Xi => Product::Dot,
            Model::PsiPrime => Product::Bullet,
        }
    }

    /// Evaluate a word letter by letter with the model's product.
    pub fn embed_word(&self, w: &Word, kind: Kind, n: usize, product: Product) -> Result<KElement> {
        let q = self.q();
        let mut acc = KElement::unit(n, q);
        for g in w.letters() {
            let cell = match kind {
                Kind::Frt => MatrixType::unit(n, g.row(), g.col()),
                Kind::Dd => MatrixType::unit(n, g.col(), g.row()),
            };
            acc = self.k_multiply(&acc, &KElement::basis(cell, q), product)?;
        }
        Ok(acc)
    }

    pub fn embed_symbolic(&self, x: &NCPoly, model: Model) -> Result<KElement> {
        if x.kind() != model.source_kind() {
            return Err(Error::Mismatch(format!(
                "model {model:?} expects a {:?} element, got {:?}",
                model.source_kind(),
                x.kind()
            )));
        }
        if model == Model::Xi {
            let image = xi_transport(x, &Bicharacter::frt_twist(x.n()))?;
            return self.embed_symbolic(&image, Model::Psi);
        }
        let product = Self::product_for(model);
        let q = self.q();
        let mut out = KElement::zero(x.n(), q);
        for (w, c) in x.terms() {
            // the Dipper-Donkin parameter is q = v²
            let c = match model {
                Model::PsiPrime => c.square_parameter(),
                _ => c.clone(),
            };
            let image = self.embed_word(w, x.kind(), x.n(), product)?;
            out = out.add(&image.scale(&evaluate(&c, q)?))?;
        }
        Ok(out)
    }

    pub fn embed_divided(&self, x: &DividedMonomial, model: Model) -> Result<KElement> {
        let num = self.embed_symbolic(&x.numerator, model)?;
        let den = match model {
            Model::PsiPrime | Model::Xi => x.denominator.square_parameter(),
            _ => x.denominator.clone(),
        };
        let inv = evaluate(&den, self.q())?
            .inverse()
            .ok_or_else(|| Error::Domain("denominator vanishes".into()))?;
        Ok(num.scale(&inv))
    }

    /// `Π_{(i,j) lex} 1_{e_ij}^{m_ij}` under the chosen product.
    pub fn ordered_monomial(&self, m: &MatrixType, product: Product) -> Result<KElement> {
        let w = crate::qalgebra::pbw_monomial(m, Kind::Frt);
        let (word, _) = w.terms().next().expect("monomial");
        self.embed_word(word, Kind::Frt, m.n(), product)
    }
}

fn big_ratio(num: u128, den: u128) -> Rational {
    use num_bigint::BigInt;
    Rational::new(BigInt::from(num), BigInt::from(den))
}

fn add3(out: &mut KTensor3, key: (MatrixType, MatrixType, MatrixType), c: EvaluatedScalar, q: u64) {
    if c.is_zero() {
        return;
    }
    let entry = out.entry(key).or_insert_with(|| EvaluatedScalar::zero(q));
    *entry += &c;
    out.retain(|_, c| !c.is_zero());
}

/// `1_M ↦ 1_{Mᵀ}` and `1_M ↦ 1_{JMJ}`, the geometric `τ1` and `τ2`.
pub fn tau_geometric(x: &KElement, which: crate::qalgebra::Involution) -> KElement {
    use crate::qalgebra::Involution;
    match which {
        Involution::Tau1 => x.map_basis(MatrixType::transpose),
        Involution::Tau2 => x.map_basis(MatrixType::jmj),
        Involution::Tau3 => x.map_basis(|m| m.jmj().transpose()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::quantum_int;

    fn e(i: usize, j: usize) -> MatrixType {
        MatrixType::unit(2, i, j)
    }

    #[test]
    fn dot_example() {
        let k = Convolution::new(3).unwrap();
        let p = k
            .k_multiply(
                &KElement::basis(e(2, 1), 3),
                &KElement::basis(e(1, 2), 3),
                Product::Dot,
            )
            .unwrap();
        let anti = e(1, 2).add(&e(2, 1));
        assert_eq!(
            p,
            KElement::basis(anti, 3).scale(&EvaluatedScalar::v_pow(3, 1))
        );
    }

    #[test]
    fn bullet_example() {
        for q in [2u64, 3] {
            let k = Convolution::new(q).unwrap();
            let p = k
                .k_multiply(
                    &KElement::basis(e(2, 2), q),
                    &KElement::basis(e(1, 1), q),
                    Product::Bullet,
                )
                .unwrap();
            assert_eq!(p.coeff(&e(1, 1).add(&e(2, 2))), EvaluatedScalar::one(q));
            assert_eq!(
                p.coeff(&e(1, 2).add(&e(2, 1))),
                EvaluatedScalar::from_int(q, q as i64 - 1)
            );
            assert_eq!(p.len(), 2);
        }
    }

    #[test]
    fn divided_power_in_circ() {
        for q in [2u64, 3] {
            let k = Convolution::new(q).unwrap();
            for m in 1..=3u32 {
                let p = k
                    .k_multiply(
                        &KElement::basis(e(1, 2), q),
                        &KElement::basis(MatrixType::cell(2, 1, 2, m), q),
                        Product::Circ,
                    )
                    .unwrap();
                let expected = KElement::basis(MatrixType::cell(2, 1, 2, m + 1), q)
                    .scale_scalar(&quantum_int(m + 1))
                    .unwrap();
                assert_eq!(p, expected);
            }
        }
    }

    #[test]
    fn plain_coproduct_of_generator() {
        let k = Convolution::new(2).unwrap();
        let t = k
            .k_comultiply(&KElement::basis(e(1, 1), 2), Coproduct::Plain)
            .unwrap();
        assert_eq!(t.len(), 2);
        assert!(t.coeff(&e(1, 1), &e(1, 1)).is_one());
        assert!(t.coeff(&e(1, 2), &e(2, 1)).is_one());
        let unit = k
            .k_comultiply(&KElement::unit(2, 2), Coproduct::Plain)
            .unwrap();
        assert!(unit
            .coeff(&MatrixType::zero(2), &MatrixType::zero(2))
            .is_one());
        assert_eq!(unit.len(), 1);
    }

    #[test]
    fn tilde_coproduct_n1() {
        for q in [2u64, 3] {
            let k = Convolution::new(q).unwrap();
            let e11 = MatrixType::unit(1, 1, 1);
            let t = k
                .k_comultiply(&KElement::basis(e11.clone(), q), Coproduct::Tilde)
                .unwrap();
            let expected =
                &EvaluatedScalar::u_pow(q, -3) * &EvaluatedScalar::from_int(q, q as i64 - 1);
            assert_eq!(t.coeff(&e11, &e11), expected);
        }
    }

    #[test]
    fn counit_and_determinant() {
        assert!(k_counit(&KElement::basis(e(1, 1), 2)).is_one());
        assert!(k_counit(&KElement::basis(e(1, 2), 2)).is_zero());
        let det2 = determinant_element(2, 3);
        assert_eq!(det2.len(), 2);
        assert_eq!(
            det2.coeff(&e(1, 2).add(&e(2, 1))),
            EvaluatedScalar::from_int(3, -1)
        );
        assert_eq!(
            determinant_element(1, 2),
            KElement::basis(MatrixType::unit(1, 1, 1), 2)
        );
        assert_eq!(determinant_element(3, 2).len(), 6);
    }

    #[test]
    fn model_kind_mismatch() {
        let k = Convolution::new(2).unwrap();
        let c = NCPoly::generator(Kind::Dd, 2, 1, 2).unwrap();
        assert!(k.embed_symbolic(&c, Model::Psi).is_err());
        let img = k.embed_symbolic(&c, Model::PsiPrime).unwrap();
        assert_eq!(img, KElement::basis(e(2, 1), 2));
    }
}
