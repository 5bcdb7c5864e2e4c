//! Verification suites. Each suite compares two computations instance by
//! instance and reports every disagreement; a failure is report content,
//! not an error.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::convolution::{
    circ_tables, determinant_element, dot_tables, k_counit, tau_geometric, Convolution, Coproduct,
    KElement, KTensor, Model, Product, TableColumn,
};
use crate::error::{Error, Result};
use crate::flaggeo::{twist_exponents, MatrixType};
use crate::qalgebra::{
    antipode_generator, dd_relations, determinant, divided_pbw_monomial, frt_relations, involution,
    pbw_monomial, transported_dd_antipode, twisted_multiply_localized, xi_transport, Bicharacter,
    Involution, Kind, LocalizedElement, NCPoly,
};
use crate::scalar::{EvaluatedScalar, Rational};

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Failure {
    pub inputs: Value,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Report {
    pub suite: String,
    pub n: usize,
    pub q: u64,
    pub instances: usize,
    pub failures: Vec<Failure>,
}

impl Report {
    fn new(suite: Suite, n: usize, q: u64) -> Self {
        Self {
            suite: suite.name().to_string(),
            n,
            q,
            instances: 0,
            failures: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn check<T: PartialEq + fmt::Debug>(&mut self, inputs: Value, lhs: &T, rhs: &T) {
        self.instances += 1;
        if lhs != rhs {
            self.failures.push(Failure {
                inputs,
                lhs: format!("{lhs:?}"),
                rhs: format!("{rhs:?}"),
            });
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    RelationsCirc,
    RelationsDot,
    RelationsBullet,
    Pbw,
    NewPbw,
    Green,
    MultH,
    Determinant,
    Hopf,
    Coassoc,
    TildeHom,
    TwistIso,
    Tau,
}

impl Suite {
    pub const ALL: [Suite; 13] = [
        Suite::RelationsCirc,
        Suite::RelationsDot,
        Suite::RelationsBullet,
        Suite::Pbw,
        Suite::NewPbw,
        Suite::Green,
        Suite::MultH,
        Suite::Determinant,
        Suite::Hopf,
        Suite::Coassoc,
        Suite::TildeHom,
        Suite::TwistIso,
        Suite::Tau,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::RelationsCirc => "relations-circ",
            Suite::RelationsDot => "relations-dot",
            Suite::RelationsBullet => "relations-bullet",
            Suite::Pbw => "pbw",
            Suite::NewPbw => "newpbw",
            Suite::Green => "green",
            Suite::MultH => "mult-h",
            Suite::Determinant => "determinant",
            Suite::Hopf => "hopf",
            Suite::Coassoc => "coassoc",
            Suite::TildeHom => "tilde-hom",
            Suite::TwistIso => "twist-iso",
            Suite::Tau => "tau",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Domain(format!("unknown suite {s:?}")))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SuiteParams {
    pub n: usize,
    /// Degree bound; suites that only make sense in a fixed degree ignore it.
    pub d: u32,
    /// Check only this many randomly chosen instances (where supported).
    pub sample: Option<usize>,
    pub seed: u64,
}

impl SuiteParams {
    pub fn new(n: usize, d: u32) -> Self {
        Self {
            n,
            d,
            sample: None,
            seed: 0,
        }
    }
}

pub fn run_suite(suite: Suite, k: &Convolution, p: &SuiteParams) -> Result<Report> {
    if p.n == 0 {
        return Err(Error::Domain("n must be positive".into()));
    }
    let mut r = Report::new(suite, p.n, k.q());
    match suite {
        Suite::RelationsCirc => relations(k, p, &mut r, Model::Phi)?,
        Suite::RelationsDot => relations(k, p, &mut r, Model::Psi)?,
        Suite::RelationsBullet => relations(k, p, &mut r, Model::PsiPrime)?,
        Suite::Pbw => pbw(k, p, &mut r)?,
        Suite::NewPbw => newpbw(k, p, &mut r)?,
        Suite::Green => green(k, p, &mut r)?,
        Suite::MultH => mult_h(k, p, &mut r)?,
        Suite::Determinant => determinant_suite(k, p, &mut r)?,
        Suite::Hopf => hopf(p, &mut r)?,
        Suite::Coassoc => coassoc(k, p, &mut r)?,
        Suite::TildeHom => tilde_hom(k, p, &mut r)?,
        Suite::TwistIso => twist_iso(k, p, &mut r)?,
        Suite::Tau => tau(k, p, &mut r)?,
    }
    Ok(r)
}

pub fn verify_green(n: usize, d: u32, q: u64) -> Result<Report> {
    run_suite(Suite::Green, &Convolution::new(q)?, &SuiteParams::new(n, d))
}

pub fn verify_mult_h(n: usize, d: u32, q: u64) -> Result<Report> {
    run_suite(Suite::MultH, &Convolution::new(q)?, &SuiteParams::new(n, d))
}

fn theta_upto(n: usize, d: u32) -> Vec<MatrixType> {
    (0..=d).flat_map(|k| MatrixType::theta(n, k)).collect()
}

fn theta_positive(n: usize, d: u32) -> Vec<MatrixType> {
    (1..=d).flat_map(|k| MatrixType::theta(n, k)).collect()
}

fn basis(m: &MatrixType, q: u64) -> KElement {
    KElement::basis(m.clone(), q)
}

fn mjson(m: &MatrixType) -> Value {
    serde_json::to_value(m).expect("matrix json")
}

/// Ordered pairs of nonzero types with total degree at most `d`.
fn pairs_upto(n: usize, d: u32) -> Vec<(MatrixType, MatrixType)> {
    let all = theta_positive(n, d);
    let mut out = Vec::new();
    for a in &all {
        for b in &all {
            if a.d() + b.d() <= d {
                out.push((a.clone(), b.clone()));
            }
        }
    }
    out
}

fn check_table(k: &Convolution, r: &mut Report, col: &TableColumn) -> Result<()> {
    let observed = col.observe(k.geometry())?;
    let inputs = json!({"table": col.table, "left": mjson(&col.left), "right": mjson(&col.right)});
    r.check(inputs, &observed, &col.expected(k.q()));
    Ok(())
}

fn relations(k: &Convolution, p: &SuiteParams, r: &mut Report, model: Model) -> Result<()> {
    let rels = match model.source_kind() {
        Kind::Frt => frt_relations(p.n),
        Kind::Dd => dd_relations(p.n),
    };
    let zero = KElement::zero(p.n, k.q());
    for rel in rels {
        let image = k.embed_symbolic(&rel.poly, model)?;
        r.check(json!({"relation": rel.label}), &image, &zero);
        if model == Model::PsiPrime {
            // the same relation through the twisted transport
            let image = k.embed_symbolic(&rel.poly, Model::Xi)?;
            r.check(json!({"relation": rel.label, "via": "xi"}), &image, &zero);
        }
    }
    if p.n == 2 {
        let cols = match model {
            Model::Phi => circ_tables(),
            Model::Psi => dot_tables(),
            _ => Vec::new(),
        };
        for col in &cols {
            check_table(k, r, col)?;
        }
    }
    Ok(())
}

fn pbw(k: &Convolution, p: &SuiteParams, r: &mut Report) -> Result<()> {
    let q = k.q();
    for m in theta_upto(p.n, p.d) {
        let lhs = k.embed_divided(&divided_pbw_monomial(&m, Kind::Frt), Model::Phi)?;
        let rhs = basis(&m, q).scale(&EvaluatedScalar::v_pow(q, -m.orbit_dim()));
        r.check(json!({"M": mjson(&m)}), &lhs, &rhs);
    }
    Ok(())
}

fn newpbw(k: &Convolution, p: &SuiteParams, r: &mut Report) -> Result<()> {
    let q = k.q();
    for m in theta_upto(p.n, p.d) {
        let lhs = k.embed_symbolic(&pbw_monomial(&m, Kind::Frt), Model::Psi)?;
        let rhs = basis(&m, q).scale(&EvaluatedScalar::v_pow(q, m.crossings()));
        r.check(json!({"M": mjson(&m), "product": "dot"}), &lhs, &rhs);
        let lhs = k.ordered_monomial(&m, Product::Bullet)?;
        let rhs = basis(&m, q).scale(&EvaluatedScalar::v_pow(q, 2 * m.crossings()));
        r.check(json!({"M": mjson(&m), "product": "bullet"}), &lhs, &rhs);
    }
    Ok(())
}

type PairCounts = BTreeMap<(MatrixType, MatrixType), u128>;

fn add_count(map: &mut PairCounts, key: (MatrixType, MatrixType), c: u128) {
    if c != 0 {
        *map.entry(key).or_insert(0) += c;
    }
}

/// Both sides of Green's formula for fixed `(L'', L')`, keyed by `(M, N)`.
fn green_sides(
    k: &Convolution,
    l2: &MatrixType,
    l1: &MatrixType,
) -> Result<(PairCounts, PairCounts)> {
    let geo = k.geometry();
    let mut lhs = PairCounts::new();
    for (l, h) in geo.h_terms(l2, l1)? {
        for (m, nn, c) in geo.coproduct_terms(&l)? {
            add_count(&mut lhs, (m, nn), h * c);
        }
    }
    let mut rhs = PairCounts::new();
    let right2 = geo.coproduct_terms(l2)?;
    let right1 = geo.coproduct_terms(l1)?;
    for (m2, n2, c2) in &right2 {
        for (m1, n1, c1) in &right1 {
            let hm = geo.h_terms(m2, m1)?;
            let hn = geo.h_terms(n2, n1)?;
            for (m, a) in &hm {
                for (nn, b) in &hn {
                    add_count(&mut rhs, (m.clone(), nn.clone()), a * b * c2 * c1);
                }
            }
        }
    }
    Ok((lhs, rhs))
}

fn green(k: &Convolution, p: &SuiteParams, r: &mut Report) -> Result<()> {
    let mut groups = Vec::new();
    for dl in 0..=p.d {
        for l2 in MatrixType::theta(p.n, dl) {
            for l1 in MatrixType::theta(p.n, p.d - dl) {
                groups.push((l2.clone(), l1));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    if p.sample.is_some() {
        groups.shuffle(&mut rng);
    }
    'outer: for (l2, l1) in groups {
        let (lhs, rhs) = green_sides(k, &l2, &l1)?;
        let keys: BTreeSet<_> = lhs.keys().chain(rhs.keys()).cloned().collect();
        for key in keys {
            if p.sample.is_some_and(|s| r.instances >= s) {
                break 'outer;
            }
            let inputs = json!({"L''": mjson(&l2), "L'": mjson(&l1), "M": mjson(&key.0), "N": mjson(&key.1)});
            r.check(
                inputs,
                &lhs.get(&key).copied().unwrap_or(0),
                &rhs.get(&key).copied().unwrap_or(0),
            );
        }
    }
    Ok(())
}

fn mult_h(k: &Convolution, p: &SuiteParams, r: &mut Report) -> Result<()> {
    let geo = k.geometry();
    let q = k.q();
    for d2 in 0..=p.d {
        for m2 in MatrixType::theta(p.n, d2) {
            for m1 in MatrixType::theta(p.n, p.d - d2) {
                let g: BTreeMap<_, _> = geo.g_terms(&m2, &m1)?.into_iter().collect();
                let h: BTreeMap<_, _> = geo.h_terms(&m2, &m1)?.into_iter().collect();
                let (c2, c1) = (m2.ro(), m1.ro());
                let mut e = -(m2.d() as i64 * m1.d() as i64);
                for i in 0..p.n {
                    for j in i + 1..p.n {
                        e += c1.parts()[i] as i64 * c2.parts()[j] as i64;
                    }
                }
                let a2 = geo.stabilizer_order(&m2)?;
                let a1 = geo.stabilizer_order(&m1)?;
                let keys: BTreeSet<_> = g.keys().chain(h.keys()).cloned().collect();
                for m in keys {
                    let am = geo.stabilizer_order(&m)?;
                    let gv = big(*g.get(&m).unwrap_or(&0));
                    let hv = big(*h.get(&m).unwrap_or(&0));
                    let rhs = q_power(q, e) * big(am) / (big(a2) * big(a1)) * hv;
                    let inputs = json!({"M": mjson(&m), "M''": mjson(&m2), "M'": mjson(&m1)});
                    r.check(inputs, &gv, &rhs);
                }
            }
        }
    }
    Ok(())
}

fn big(x: u128) -> Rational {
    Rational::from_integer(x.into())
}

fn q_power(q: u64, e: i64) -> Rational {
    let base = Rational::from_integer(q.into());
    if e >= 0 {
        num_traits::pow(base, e as usize)
    } else {
        num_traits::pow(base.recip(), (-e) as usize)
    }
}

fn determinant_suite(k: &Convolution, p: &SuiteParams, r: &mut Report) -> Result<()> {
    let q = k.q();
    let det = determinant_element(p.n, q);
    let frt = k.embed_symbolic(&determinant(Kind::Frt, p.n), Model::Psi)?;
    r.check(json!({"model": "psi"}), &frt, &det);
    let dd = k.embed_symbolic(&determinant(Kind::Dd, p.n), Model::PsiPrime)?;
    r.check(json!({"model": "psi-prime"}), &dd, &det);
    let xi = k.embed_symbolic(&determinant(Kind::Dd, p.n), Model::Xi)?;
    r.check(json!({"model": "xi"}), &xi, &det);
    for i in 1..=p.n {
        for j in 1..=p.n {
            let e = basis(&MatrixType::unit(p.n, i, j), q);
            let left = k.k_multiply(&det, &e, Product::Dot)?;
            let right = k.k_multiply(&e, &det, Product::Dot)?;
            r.check(json!({"central": [i, j]}), &left, &right);
        }
    }
    Ok(())
}

fn delta(i: usize, j: usize, n: usize) -> LocalizedElement {
    if i == j {
        LocalizedElement::one(Kind::Frt, n)
    } else {
        LocalizedElement::zero(Kind::Frt, n)
    }
}

fn generator(n: usize, i: usize, j: usize) -> Result<LocalizedElement> {
    Ok(LocalizedElement::from_poly(NCPoly::generator(
        Kind::Frt,
        n,
        i,
        j,
    )?))
}

fn sum(items: Vec<LocalizedElement>, n: usize) -> Result<LocalizedElement> {
    items
        .into_iter()
        .try_fold(LocalizedElement::zero(Kind::Frt, n), |acc, x| acc.add(&x))
}

/// Antipode axioms for `S` on the FRT algebra and for the transported
/// Dipper-Donkin antipode under the twisted product.
fn hopf(p: &SuiteParams, r: &mut Report) -> Result<()> {
    let n = p.n;
    let psi = Bicharacter::frt_twist(n);
    for i in 1..=n {
        for j in 1..=n {
            let mut left = Vec::new();
            let mut right = Vec::new();
            let mut tleft = Vec::new();
            let mut tright = Vec::new();
            for kk in 1..=n {
                left.push(
                    antipode_generator(Kind::Frt, n, i, kk)?.multiply(&generator(n, kk, j)?)?,
                );
                right.push(generator(n, i, kk)?.multiply(&antipode_generator(
                    Kind::Frt,
                    n,
                    kk,
                    j,
                )?)?);
                // Ξ(c_kj) = E_jk
                tleft.push(twisted_multiply_localized(
                    &transported_dd_antipode(n, i, kk)?,
                    &generator(n, j, kk)?,
                    &psi,
                )?);
                tright.push(twisted_multiply_localized(
                    &generator(n, kk, i)?,
                    &transported_dd_antipode(n, kk, j)?,
                    &psi,
                )?);
            }
            let expected = delta(i, j, n);
            r.check(
                json!({"axiom": "S(E_ik)E_kj", "i": i, "j": j}),
                &sum(left, n)?,
                &expected,
            );
            r.check(
                json!({"axiom": "E_ik S(E_kj)", "i": i, "j": j}),
                &sum(right, n)?,
                &expected,
            );
            r.check(
                json!({"axiom": "twisted S(c_ik)c_kj", "i": i, "j": j}),
                &sum(tleft, n)?,
                &expected,
            );
            r.check(
                json!({"axiom": "twisted c_ik S(c_kj)", "i": i, "j": j}),
                &sum(tright, n)?,
                &expected,
            );
        }
    }
    Ok(())
}

/// `S Ξ(c_ij)` against `Ξ S^{DD}(c_ij)` for every generator.
pub fn antipode_compatibility(
    n: usize,
) -> Result<Vec<(usize, usize, LocalizedElement, LocalizedElement)>> {
    let mut out = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            out.push((
                i,
                j,
                antipode_generator(Kind::Frt, n, j, i)?,
                transported_dd_antipode(n, i, j)?,
            ));
        }
    }
    Ok(out)
}

fn coassoc(k: &Convolution, p: &SuiteParams, r: &mut Report) -> Result<()> {
    let q = k.q();
    for l in theta_upto(p.n, p.d) {
        let x = basis(&l, q);
        for kind in [Coproduct::Plain, Coproduct::Prime, Coproduct::Tilde] {
            let t = k.k_comultiply(&x, kind)?;
            let lhs = k.comultiply_left(&t, kind)?;
            let rhs = k.comultiply_right(&t, kind)?;
            r.check(
                json!({"L": mjson(&l), "coproduct": format!("{kind:?}")}),
                &lhs,
                &rhs,
            );
        }
        let t = k.k_comultiply(&x, Coproduct::Plain)?;
        r.check(
            json!({"L": mjson(&l), "counit": "left"}),
            &t.counit_left(),
            &x,
        );
        r.check(
            json!({"L": mjson(&l), "counit": "right"}),
            &t.counit_right(),
            &x,
        );
        for kind in [Kind::Frt, Kind::Dd] {
            let m = pbw_monomial(&l, kind);
            let t = m.comultiply();
            let inputs = json!({"L": mjson(&l), "symbolic": kind.symbol()});
            r.check(inputs.clone(), &t.comultiply_left(), &t.comultiply_right());
            r.check(inputs.clone(), &t.counit_left(), &m);
            r.check(inputs, &t.counit_right(), &m);
        }
    }
    Ok(())
}

fn tilde_hom(k: &Convolution, p: &SuiteParams, r: &mut Report) -> Result<()> {
    let q = k.q();
    let checks = [
        (Product::Dot, Coproduct::Plain),
        (Product::Bullet, Coproduct::Plain),
        (Product::Circ, Coproduct::Tilde),
    ];
    for (a, b) in pairs_upto(p.n, p.d.max(2)) {
        let (x, y) = (basis(&a, q), basis(&b, q));
        for (prod, co) in checks {
            let lhs = k.k_comultiply(&k.k_multiply(&x, &y, prod)?, co)?;
            let rhs =
                k.tensor_multiply(&k.k_comultiply(&x, co)?, &k.k_comultiply(&y, co)?, prod)?;
            let inputs = json!({"left": mjson(&a), "right": mjson(&b), "product": format!("{prod:?}"), "coproduct": format!("{co:?}")});
            r.check(inputs, &lhs, &rhs);
        }
        let (ex, ey) = (k_counit(&x), k_counit(&y));
        for prod in [Product::Dot, Product::Bullet] {
            let lhs = k_counit(&k.k_multiply(&x, &y, prod)?);
            r.check(
                json!({"left": mjson(&a), "right": mjson(&b), "counit": format!("{prod:?}")}),
                &lhs,
                &(&ex * &ey),
            );
        }
    }
    // Δ'(E'_ij) = Σ_k E'_ik ⊗ E'_kj with E'_ij = (q-1) 1_{e_ij}
    let scale = EvaluatedScalar::from_int(q, q as i64 - 1);
    for i in 1..=p.n {
        for j in 1..=p.n {
            let e = basis(&MatrixType::unit(p.n, i, j), q).scale(&scale);
            let lhs = k.k_comultiply(&e, Coproduct::Prime)?;
            let mut rhs = KTensor::zero(p.n, q);
            for kk in 1..=p.n {
                rhs.add_term(
                    MatrixType::unit(p.n, i, kk),
                    MatrixType::unit(p.n, kk, j),
                    &scale * &scale,
                );
            }
            r.check(
                json!({"generator": [i, j], "coproduct": "Prime"}),
                &lhs,
                &rhs,
            );
        }
    }
    Ok(())
}

fn twist_iso(k: &Convolution, p: &SuiteParams, r: &mut Report) -> Result<()> {
    let q = k.q();
    let psi = Bicharacter::frt_twist(p.n);
    let zero = NCPoly::zero(Kind::Frt, p.n);
    for rel in dd_relations(p.n) {
        r.check(
            json!({"relation": rel.label}),
            &xi_transport(&rel.poly, &psi)?,
            &zero,
        );
    }
    for m in theta_upto(p.n, p.d) {
        let c = pbw_monomial(&m, Kind::Dd);
        let lhs = k.embed_symbolic(&c, Model::Xi)?;
        let rhs = k.embed_symbolic(&c, Model::PsiPrime)?;
        r.check(json!({"dd-monomial": mjson(&m)}), &lhs, &rhs);
    }
    let chi = Bicharacter::chi_star(p.n);
    for (a, b) in pairs_upto(p.n, p.d) {
        let (x, y) = (basis(&a, q), basis(&b, q));
        let lhs = k.k_multiply(&x, &y, Product::Dot)?;
        let e = chi.eval(&degree(&a), &degree(&b));
        debug_assert_eq!(e, -twist_exponents(&a, &b).dot);
        let rhs = k
            .k_multiply(&x, &y, Product::Bullet)?
            .scale(&EvaluatedScalar::v_pow(q, e));
        r.check(json!({"left": mjson(&a), "right": mjson(&b)}), &lhs, &rhs);
    }
    Ok(())
}

fn degree(m: &MatrixType) -> crate::qalgebra::MultiDegree {
    crate::qalgebra::MultiDegree {
        rows: m.ro().parts().iter().map(|&x| x as i64).collect(),
        cols: m.co().parts().iter().map(|&x| x as i64).collect(),
    }
}

fn tau(k: &Convolution, p: &SuiteParams, r: &mut Report) -> Result<()> {
    let q = k.q();
    let all = [Involution::Tau1, Involution::Tau2, Involution::Tau3];
    let zero = NCPoly::zero(Kind::Frt, p.n);
    for rel in frt_relations(p.n) {
        for which in all {
            let image = involution(&rel.poly, which)?;
            r.check(
                json!({"relation": rel.label, "involution": format!("{which:?}")}),
                &image,
                &zero,
            );
        }
    }
    for m in theta_upto(p.n, p.d) {
        let x = pbw_monomial(&m, Kind::Frt);
        for which in all {
            let lhs = k.embed_symbolic(&involution(&x, which)?, Model::Psi)?;
            let rhs = tau_geometric(&k.embed_symbolic(&x, Model::Psi)?, which);
            r.check(
                json!({"M": mjson(&m), "involution": format!("{which:?}")}),
                &lhs,
                &rhs,
            );
        }
    }
    for (a, b) in pairs_upto(p.n, p.d) {
        let (x, y) = (basis(&a, q), basis(&b, q));
        let xy = k.k_multiply(&x, &y, Product::Dot)?;
        for which in all {
            let (tx, ty) = (tau_geometric(&x, which), tau_geometric(&y, which));
            let rhs = match which {
                Involution::Tau1 => k.k_multiply(&tx, &ty, Product::Dot)?,
                _ => k.k_multiply(&ty, &tx, Product::Dot)?,
            };
            let inputs =
                json!({"left": mjson(&a), "right": mjson(&b), "involution": format!("{which:?}")});
            r.check(inputs, &tau_geometric(&xy, which), &rhs);
        }
    }
    Ok(())
}
