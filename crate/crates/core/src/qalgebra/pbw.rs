//! PBW monomials `E^M` and divided monomials `E^{(M)}`.

use super::{GeneratorIndex, Kind, NCPoly, Word};
use crate::error::Result;
use crate::flaggeo::MatrixType;
use crate::scalar::{quantum_factorial, Scalar};

/// `Π E_ij^{m_ij}` over lexicographically ordered `(i, j)`.
pub fn pbw_monomial(m: &MatrixType, kind: Kind) -> NCPoly {
    let mut letters = Vec::with_capacity(m.d() as usize);
    for (i, j, k) in m.cells() {
        for _ in 0..k {
            letters.push(GeneratorIndex::new(i, j));
        }
    }
    NCPoly::from_word(kind, m.n(), Word(letters), Scalar::one())
}

/// `numerator / denominator`, needed because `1/[m]!` is not a Laurent
/// polynomial.
#[derive(Clone, Debug)]
pub struct DividedMonomial {
    pub numerator: NCPoly,
    pub denominator: Scalar,
}

impl DividedMonomial {
    pub fn new(numerator: NCPoly, denominator: Scalar) -> Self {
        assert!(!denominator.is_zero(), "zero denominator");
        Self {
            numerator,
            denominator,
        }
    }

    pub fn from_poly(p: NCPoly) -> Self {
        Self::new(p, Scalar::one())
    }

    pub fn multiply(&self, other: &DividedMonomial) -> Result<DividedMonomial> {
        Ok(Self::new(
            self.numerator.multiply(&other.numerator)?,
            &self.denominator * &other.denominator,
        ))
    }

    pub fn scale(&self, s: &Scalar) -> DividedMonomial {
        Self::new(self.numerator.scale(s), self.denominator.clone())
    }

    /// The plain element when the denominator divides every coefficient.
    pub fn to_poly(&self) -> Option<NCPoly> {
        let mut terms = Vec::new();
        for (w, c) in self.numerator.terms() {
            terms.push((w.clone(), c.div_exact(&self.denominator)?));
        }
        Some(NCPoly::from_terms(
            self.numerator.kind(),
            self.numerator.n(),
            terms,
        ))
    }
}

impl PartialEq for DividedMonomial {
    fn eq(&self, other: &Self) -> bool {
        self.numerator.scale(&other.denominator) == other.numerator.scale(&self.denominator)
    }
}

/// `Π E_ij^{(m_ij)}` with `E^{(m)} = E^m / [m]!`.
pub fn divided_pbw_monomial(m: &MatrixType, kind: Kind) -> DividedMonomial {
    let mut den = Scalar::one();
    for (_, _, k) in m.cells() {
        den = &den * &quantum_factorial(k);
    }
    DividedMonomial::new(pbw_monomial(m, kind), den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{quantum_binomial, quantum_int};

    #[test]
    fn monomial_examples() {
        let e12 = MatrixType::unit(2, 1, 2);
        assert_eq!(
            pbw_monomial(&e12, Kind::Frt),
            NCPoly::generator(Kind::Frt, 2, 1, 2).unwrap()
        );
        let anti = e12.add(&MatrixType::unit(2, 2, 1));
        let p = pbw_monomial(&anti, Kind::Frt);
        assert!(p.is_normal());
        assert_eq!(p.to_string(), "E[1,2]*E[2,1]");
        let d = divided_pbw_monomial(&MatrixType::cell(2, 1, 1, 2), Kind::Frt);
        assert_eq!(d.denominator, quantum_int(2));
        assert!(d.to_poly().is_none());
    }

    #[test]
    fn divided_power_laws() {
        for kind in [Kind::Frt, Kind::Dd] {
            let div = |m: u32| divided_pbw_monomial(&MatrixType::cell(3, 2, 1, m), kind);
            let e = DividedMonomial::from_poly(NCPoly::generator(kind, 3, 2, 1).unwrap());
            for m in 0..5u32 {
                let lhs = e.multiply(&div(m)).unwrap();
                assert_eq!(lhs, div(m + 1).scale(&quantum_int(m + 1)));
            }
            for a in 0..=5u32 {
                for b in 0..=5 - a {
                    let lhs = div(a).multiply(&div(b)).unwrap();
                    let rhs = div(a + b).scale(&quantum_binomial(a + b, a).unwrap());
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }
}
