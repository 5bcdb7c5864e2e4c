//! Multidegrees, bicharacter twists, the Dipper-Donkin to FRT transport and
//! the involutions `τ1, τ2, τ3`.

use std::collections::BTreeMap;

use super::hopf::LocalizedElement;
use super::{minor, GeneratorIndex, Kind, NCPoly, Word};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// `(row composition, column composition)`; entries may be negative once
/// `det^{-1}` is involved.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiDegree {
    pub rows: Vec<i64>,
    pub cols: Vec<i64>,
}

impl MultiDegree {
    pub fn zero(n: usize) -> Self {
        Self {
            rows: vec![0; n],
            cols: vec![0; n],
        }
    }

    /// Degree of a single letter. A Dipper-Donkin letter `c_ij` is graded
    /// like its image `E_ji`.
    pub fn of_letter(kind: Kind, n: usize, g: GeneratorIndex) -> Self {
        let g = match kind {
            Kind::Frt => g,
            Kind::Dd => g.transpose(),
        };
        let mut d = Self::zero(n);
        d.rows[g.row() - 1] = 1;
        d.cols[g.col() - 1] = 1;
        d
    }

    pub fn of_word(kind: Kind, n: usize, w: &Word) -> Self {
        w.letters().iter().fold(Self::zero(n), |acc, g| {
            acc.add(&Self::of_letter(kind, n, *g))
        })
    }

    /// Degree of `det^k` (`k` may be negative).
    pub fn of_det_power(n: usize, k: i64) -> Self {
        Self {
            rows: vec![k; n],
            cols: vec![k; n],
        }
    }

    pub fn add(&self, other: &MultiDegree) -> MultiDegree {
        MultiDegree {
            rows: self
                .rows
                .iter()
                .zip(&other.rows)
                .map(|(a, b)| a + b)
                .collect(),
            cols: self
                .cols
                .iter()
                .zip(&other.cols)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    fn concat(&self) -> Vec<i64> {
        let mut v = self.rows.clone();
        v.extend_from_slice(&self.cols);
        v
    }
}

/// Split into homogeneous components.
pub fn homogeneous_components(p: &NCPoly) -> BTreeMap<MultiDegree, NCPoly> {
    let mut out: BTreeMap<MultiDegree, NCPoly> = BTreeMap::new();
    for (w, c) in p.terms() {
        let d = MultiDegree::of_word(p.kind(), p.n(), w);
        out.entry(d)
            .or_insert_with(|| NCPoly::zero(p.kind(), p.n()))
            .add_term(w.clone(), c.clone());
    }
    out
}

/// The common degree of all terms; zero counts as degree 0.
pub fn homogeneous_degree(p: &NCPoly) -> Result<MultiDegree> {
    let comps = homogeneous_components(p);
    match comps.len() {
        0 => Ok(MultiDegree::zero(p.n())),
        1 => Ok(comps.into_keys().next().expect("one component")),
        k => Err(Error::NonHomogeneous(format!(
            "{k} distinct multidegrees in {p}"
        ))),
    }
}

/// A bilinear form on multidegrees: `χ(x, y) = xᵀ B y` with `x = rows ‖ cols`
/// of the left factor and `y` of the right factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bicharacter {
    n: usize,
    form: Vec<Vec<i64>>,
}

impl Bicharacter {
    pub fn from_form(n: usize, form: Vec<Vec<i64>>) -> Result<Self> {
        if form.len() != 2 * n || form.iter().any(|r| r.len() != 2 * n) {
            return Err(Error::Domain(format!(
                "bicharacter form must be {0}x{0}",
                2 * n
            )));
        }
        Ok(Self { n, form })
    }

    pub fn zero(n: usize) -> Self {
        Self {
            n,
            form: vec![vec![0; 2 * n]; 2 * n],
        }
    }

    /// `χ*((c'',d''),(c',d')) = Σ_{α<β} (c'_α c''_β - d'_α d''_β)`, the
    /// exponent relating the two geometric products: `· = v^{χ*} •`.
    pub fn chi_star(n: usize) -> Self {
        let mut b = Self::zero(n);
        for alpha in 0..n {
            for beta in alpha + 1..n {
                b.form[beta][alpha] = 1;
                b.form[n + beta][n + alpha] = -1;
            }
        }
        b
    }

    /// The twist `-χ*` of the FRT product under which `c_ij ↦ E_ji` becomes
    /// an algebra isomorphism.
    pub fn frt_twist(n: usize) -> Self {
        Self::chi_star(n).negate()
    }

    /// `Σ_{α<β} -(e_k)_α (e_j)_β + (e_l)_α (e_j)_β` for `E_ij · E_kl`, read
    /// literally. Kept to document that this reading does not give an
    /// isomorphism; [`Bicharacter::frt_twist`] has `e_i` in the first product.
    pub fn a_modified_verbatim(n: usize) -> Self {
        let mut b = Self::zero(n);
        for alpha in 0..n {
            for beta in alpha + 1..n {
                b.form[n + beta][alpha] = -1;
                b.form[n + beta][n + alpha] = 1;
            }
        }
        b
    }

    pub fn negate(&self) -> Self {
        Self {
            n: self.n,
            form: self
                .form
                .iter()
                .map(|r| r.iter().map(|x| -x).collect())
                .collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn form(&self) -> &[Vec<i64>] {
        &self.form
    }

    pub fn eval(&self, x: &MultiDegree, y: &MultiDegree) -> i64 {
        let (x, y) = (x.concat(), y.concat());
        let mut total = 0;
        for (a, xa) in x.iter().enumerate() {
            if *xa == 0 {
                continue;
            }
            for (b, yb) in y.iter().enumerate() {
                total += xa * self.form[a][b] * yb;
            }
        }
        total
    }
}

/// `Σ_{s<t} χ(deg w_s, deg w_t)`: the exponent picked up by evaluating the
/// word with a `χ`-twisted product.
pub fn word_twist_exponent(kind: Kind, n: usize, w: &Word, chi: &Bicharacter) -> i64 {
    let degs: Vec<MultiDegree> = w
        .letters()
        .iter()
        .map(|g| MultiDegree::of_letter(kind, n, *g))
        .collect();
    let mut total = 0;
    for s in 0..degs.len() {
        for t in s + 1..degs.len() {
            total += chi.eval(&degs[s], &degs[t]);
        }
    }
    total
}

fn check_twist(n: usize, chi: &Bicharacter) -> Result<()> {
    if chi.n != n {
        return Err(Error::Mismatch(format!(
            "bicharacter for n = {}, algebra has n = {n}",
            chi.n
        )));
    }
    Ok(())
}

/// `x ⊛ y = v^{χ(deg x, deg y)} x·y` for homogeneous `x`, `y`.
pub fn twisted_multiply(x: &NCPoly, y: &NCPoly, chi: &Bicharacter) -> Result<NCPoly> {
    x.check_compatible(y)?;
    check_twist(x.n(), chi)?;
    let e = chi.eval(&homogeneous_degree(x)?, &homogeneous_degree(y)?);
    Ok(x.multiply(y)?.scale(&Scalar::v_pow(e)))
}

fn localized_degree(x: &LocalizedElement) -> Result<MultiDegree> {
    let mut degree = None;
    for (k, p) in x.parts() {
        let d = homogeneous_degree(p)?.add(&MultiDegree::of_det_power(x.n(), -(k as i64)));
        match &degree {
            None => degree = Some(d),
            Some(prev) if *prev == d => {}
            Some(_) => {
                return Err(Error::NonHomogeneous(
                    "localized element with several multidegrees".into(),
                ))
            }
        }
    }
    Ok(degree.unwrap_or_else(|| MultiDegree::zero(x.n())))
}

/// Twisted product in the localized FRT algebra, `det^{-1}` having degree
/// `-(1,…,1 ‖ 1,…,1)`.
pub fn twisted_multiply_localized(
    x: &LocalizedElement,
    y: &LocalizedElement,
    chi: &Bicharacter,
) -> Result<LocalizedElement> {
    check_twist(x.n(), chi)?;
    let e = chi.eval(&localized_degree(x)?, &localized_degree(y)?);
    Ok(x.multiply(y)?.scale(&Scalar::v_pow(e)))
}

/// `Ξ`: send `c_ij` to `E_ji`, substitute the Dipper-Donkin parameter by
/// `v²`, and evaluate every word with the `psi`-twisted FRT product.
pub fn xi_transport(p: &NCPoly, psi: &Bicharacter) -> Result<NCPoly> {
    if p.kind() != Kind::Dd {
        return Err(Error::Mismatch(
            "the transport starts from a Dipper-Donkin element".into(),
        ));
    }
    check_twist(p.n(), psi)?;
    let mut out = NCPoly::zero(Kind::Frt, p.n());
    for (w, c) in p.terms() {
        let image = Word(w.letters().iter().map(|g| g.transpose()).collect());
        let e = word_twist_exponent(Kind::Frt, p.n(), &image, psi);
        out.add_term(image, c.square_parameter().shift(2 * e));
    }
    Ok(out.normal_form())
}

/// `Ξ S^{DD}(c_ij) = (-1)^{i+j} Ξ(A^{DD}(j,i)) ⊛ det^{-1}` with the FRT twist.
pub fn transported_dd_antipode(n: usize, i: usize, j: usize) -> Result<LocalizedElement> {
    GeneratorIndex::checked(i, j, n)?;
    let psi = Bicharacter::frt_twist(n);
    let cofactor = if n == 1 {
        NCPoly::one(Kind::Dd, n)
    } else {
        minor(Kind::Dd, n, j, i)?
    };
    let sign = if (i + j).is_multiple_of(2) { 1 } else { -1 };
    let image = xi_transport(&cofactor, &psi)?.scale(&Scalar::from_int(sign));
    twisted_multiply_localized(
        &LocalizedElement::from_poly(image),
        &LocalizedElement::det_inverse(Kind::Frt, n),
        &psi,
    )
}

/// A defining relation written as `lhs - rhs` (not normalized).
#[derive(Clone, Debug)]
pub struct Relation {
    pub label: String,
    pub poly: NCPoly,
}

fn word2(a: (usize, usize), b: (usize, usize)) -> Word {
    Word(vec![
        GeneratorIndex::new(a.0, a.1),
        GeneratorIndex::new(b.0, b.1),
    ])
}

/// Every instance of the four FRT relations.
pub fn frt_relations(n: usize) -> Vec<Relation> {
    let kind = Kind::Frt;
    let v = Scalar::v();
    let mut out = Vec::new();
    let mut push = |label: String, terms: Vec<(Word, Scalar)>| {
        out.push(Relation {
            label,
            poly: NCPoly::from_terms(kind, n, terms),
        });
    };
    for i in 1..=n {
        for j in 1..i {
            for k in 1..=n {
                for l in 1..=n {
                    if k < l {
                        push(
                            format!("E{i}{k}E{j}{l} = E{j}{l}E{i}{k}"),
                            vec![
                                (word2((i, k), (j, l)), Scalar::one()),
                                (word2((j, l), (i, k)), Scalar::from_int(-1)),
                            ],
                        );
                    } else if k > l {
                        push(
                            format!("E{i}{k}E{j}{l} = E{j}{l}E{i}{k} + (v - v^-1)E{j}{k}E{i}{l}"),
                            vec![
                                (word2((i, k), (j, l)), Scalar::one()),
                                (word2((j, l), (i, k)), Scalar::from_int(-1)),
                                (word2((j, k), (i, l)), -(&v - &Scalar::v_pow(-1))),
                            ],
                        );
                    }
                }
            }
        }
    }
    for i in 1..=n {
        for j in 1..i {
            for k in 1..=n {
                push(
                    format!("E{i}{k}E{j}{k} = v E{j}{k}E{i}{k}"),
                    vec![
                        (word2((i, k), (j, k)), Scalar::one()),
                        (word2((j, k), (i, k)), -v.clone()),
                    ],
                );
            }
        }
    }
    for i in 1..=n {
        for k in 1..=n {
            for l in 1..k {
                push(
                    format!("E{i}{k}E{i}{l} = v E{i}{l}E{i}{k}"),
                    vec![
                        (word2((i, k), (i, l)), Scalar::one()),
                        (word2((i, l), (i, k)), -v.clone()),
                    ],
                );
            }
        }
    }
    out
}

/// Every instance of the three Dipper-Donkin relations.
pub fn dd_relations(n: usize) -> Vec<Relation> {
    let kind = Kind::Dd;
    let v = Scalar::v();
    let mut out = Vec::new();
    let mut push = |label: String, terms: Vec<(Word, Scalar)>| {
        out.push(Relation {
            label,
            poly: NCPoly::from_terms(kind, n, terms),
        });
    };
    for i in 1..=n {
        for j in 1..i {
            for k in 1..=n {
                for l in 1..=n {
                    if k <= l {
                        push(
                            format!("c{i}{k}c{j}{l} = v c{j}{l}c{i}{k}"),
                            vec![
                                (word2((i, k), (j, l)), Scalar::one()),
                                (word2((j, l), (i, k)), -v.clone()),
                            ],
                        );
                    } else {
                        push(
                            format!("c{i}{k}c{j}{l} = c{j}{l}c{i}{k} + (v - 1)c{j}{k}c{i}{l}"),
                            vec![
                                (word2((i, k), (j, l)), Scalar::one()),
                                (word2((j, l), (i, k)), Scalar::from_int(-1)),
                                (word2((j, k), (i, l)), -(&v - &Scalar::one())),
                            ],
                        );
                    }
                }
            }
        }
    }
    for i in 1..=n {
        for k in 1..=n {
            for l in 1..k {
                push(
                    format!("c{i}{k}c{i}{l} = c{i}{l}c{i}{k}"),
                    vec![
                        (word2((i, k), (i, l)), Scalar::one()),
                        (word2((i, l), (i, k)), Scalar::from_int(-1)),
                    ],
                );
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Involution {
    /// `E_ij ↦ E_ji`, an algebra automorphism.
    Tau1,
    /// `E_ij ↦ E_{n+1-i, n+1-j}`, an anti-automorphism.
    Tau2,
    /// `τ1 ∘ τ2`, an anti-automorphism.
    Tau3,
}

pub fn involution(x: &NCPoly, which: Involution) -> Result<NCPoly> {
    if x.kind() != Kind::Frt {
        return Err(Error::Unsupported(
            "the involutions act on the FRT algebra".into(),
        ));
    }
    let n = x.n();
    let flip = |g: GeneratorIndex| GeneratorIndex::new(n + 1 - g.row(), n + 1 - g.col());
    let out = match which {
        Involution::Tau1 => x.map_letters(GeneratorIndex::transpose),
        Involution::Tau2 => x.map_letters(flip).reversed(),
        Involution::Tau3 => x.map_letters(|g| flip(g).transpose()).reversed(),
    };
    Ok(out.normal_form())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(n: usize, i: usize, j: usize) -> NCPoly {
        NCPoly::generator(Kind::Frt, n, i, j).unwrap()
    }

    fn c(n: usize, i: usize, j: usize) -> NCPoly {
        NCPoly::generator(Kind::Dd, n, i, j).unwrap()
    }

    #[test]
    fn relations_reduce_to_zero() {
        for n in 2..=3 {
            for r in frt_relations(n) {
                assert!(r.poly.normal_form().is_zero(), "{}", r.label);
            }
            for r in dd_relations(n) {
                assert!(r.poly.normal_form().is_zero(), "{}", r.label);
            }
        }
        assert_eq!(frt_relations(2).len(), 6);
    }

    #[test]
    fn twisted_products() {
        let chi = Bicharacter::chi_star(2);
        assert_eq!(
            twisted_multiply(&e(2, 1, 2), &e(2, 2, 1), &chi).unwrap(),
            e(2, 1, 2)
                .multiply(&e(2, 2, 1))
                .unwrap()
                .scale(&Scalar::v_pow(-1))
        );
        assert_eq!(
            twisted_multiply(&c(2, 2, 1), &c(2, 1, 2), &chi).unwrap(),
            c(2, 2, 1)
                .multiply(&c(2, 1, 2))
                .unwrap()
                .scale(&Scalar::v_pow(-1))
        );
        let zero = Bicharacter::zero(2);
        assert_eq!(
            twisted_multiply(&e(2, 2, 2), &e(2, 1, 1), &zero).unwrap(),
            e(2, 2, 2).multiply(&e(2, 1, 1)).unwrap()
        );
        let mixed = e(2, 1, 1).add(&e(2, 1, 2)).unwrap();
        assert!(matches!(
            twisted_multiply(&mixed, &e(2, 1, 1), &chi),
            Err(Error::NonHomogeneous(_))
        ));
    }

    #[test]
    fn transport_kills_dd_relations() {
        for n in 2..=3 {
            let psi = Bicharacter::frt_twist(n);
            for r in dd_relations(n) {
                assert!(
                    xi_transport(&r.poly, &psi).unwrap().is_zero(),
                    "{}",
                    r.label
                );
            }
        }
    }

    #[test]
    fn verbatim_a_modified_fails() {
        let psi = Bicharacter::a_modified_verbatim(2);
        let bad = dd_relations(2)
            .into_iter()
            .filter(|r| !xi_transport(&r.poly, &psi).unwrap().is_zero())
            .count();
        assert!(bad > 0);
    }

    #[test]
    fn transported_determinant() {
        for n in 1..=3 {
            let dd = super::super::determinant(Kind::Dd, n);
            let image = xi_transport(&dd, &Bicharacter::frt_twist(n)).unwrap();
            assert_eq!(image, super::super::determinant(Kind::Frt, n));
        }
    }

    #[test]
    fn involutions() {
        assert_eq!(
            involution(&e(2, 1, 2), Involution::Tau1).unwrap(),
            e(2, 2, 1)
        );
        assert_eq!(
            involution(&e(2, 1, 1), Involution::Tau2).unwrap(),
            e(2, 2, 2)
        );
        for i in 1..=3 {
            for j in 1..=3 {
                let x = e(3, i, j);
                let twice =
                    involution(&involution(&x, Involution::Tau3).unwrap(), Involution::Tau3)
                        .unwrap();
                assert_eq!(twice, x);
            }
        }
        assert!(involution(&c(2, 1, 1), Involution::Tau1).is_err());
    }
}
