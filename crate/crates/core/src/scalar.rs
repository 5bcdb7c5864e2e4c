//! Exact coefficients: Laurent polynomials in `u = q^{1/4}` with rational
//! coefficients, and their images in the field `Q[u]/(u^4 - q)` for a prime `q`.
//!
//! The quantum parameter is `v = u^2` and the field size is `q = u^4`, so every
//! exponent that appears in the twisted products and coproducts is an integer
//! number of quarter-units.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rational_int(n: impl Into<BigInt>) -> Rational {
    Rational::from_integer(n.into())
}

fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn parse_rational(s: &str) -> Option<Rational> {
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s.trim(), "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(Rational::new(num, den))
}

pub fn is_prime(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= q {
        if q.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

/// A Laurent polynomial in `u = q^{1/4}` with rational coefficients.
///
/// Exponents are stored in quarter-units; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    terms: BTreeMap<i64, Rational>,
}

impl Scalar {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(Rational::one(), 0)
    }

    pub fn from_int(n: i64) -> Self {
        Self::monomial(rational_int(n), 0)
    }

    pub fn from_rational(r: Rational) -> Self {
        Self::monomial(r, 0)
    }

    /// `coeff * u^exponent`.
    pub fn monomial(coeff: Rational, exponent: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exponent, coeff);
        }
        Self { terms }
    }

    pub fn u_pow(k: i64) -> Self {
        Self::monomial(Rational::one(), k)
    }

    pub fn v_pow(k: i64) -> Self {
        Self::u_pow(2 * k)
    }

    pub fn q_pow(k: i64) -> Self {
        Self::u_pow(4 * k)
    }

    /// The parameter `v = q^{1/2}`.
    pub fn v() -> Self {
        Self::v_pow(1)
    }

    /// `(-v)^k`.
    pub fn neg_v_pow(k: i64) -> Self {
        let s = Self::v_pow(k);
        if k.rem_euclid(2) == 1 {
            -s
        } else {
            s
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    /// Coefficient of `u^k`.
    pub fn coeff(&self, k: i64) -> Rational {
        self.terms.get(&k).cloned().unwrap_or_else(Rational::zero)
    }

    /// `(exponent in quarter-units, coefficient)` pairs in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rational)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, k: i64, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(k).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(k, c)| (*k, c * r)).collect(),
        }
    }

    /// Multiply by `u^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Substitute `u -> u^2`, i.e. `v -> v^2 = q`.
    ///
    /// Used when a Dipper-Donkin coefficient, written in its own parameter, is
    /// read in the algebra whose parameter is the square root of it.
    pub fn square_parameter(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(k, c)| (2 * k, c.clone())).collect(),
        }
    }

    /// Image under the bar involution `u -> u^{-1}`.
    pub fn bar(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(k, c)| (-k, c.clone())).collect(),
        }
    }

    /// True when every exponent is even in `u` with an integer coefficient, i.e.
    /// the element lies in `Z[v, v^{-1}]`.
    pub fn is_integral_in_v(&self) -> bool {
        self.terms
            .iter()
            .all(|(k, c)| k.rem_euclid(2) == 0 && c.is_integer())
    }

    fn min_exponent(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    fn max_exponent(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Exact quotient `self / divisor`, or `None` when the division leaves a
    /// remainder or the divisor is zero.
    pub fn div_exact(&self, divisor: &Scalar) -> Option<Scalar> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Scalar::zero());
        }
        let lo_b = divisor.min_exponent()?;
        let hi_b = divisor.max_exponent()?;
        let lead_b = divisor.coeff(hi_b);
        let lo_a = self.min_exponent()?;
        // Work with A(u) = u^{-lo_a} a and B(u) = u^{-lo_b} b as ordinary polynomials.
        let mut rem = self.shift(-lo_a);
        let b = divisor.shift(-lo_b);
        let deg_b = hi_b - lo_b;
        let mut quotient = Scalar::zero();
        while let Some(deg_r) = rem.max_exponent() {
            if deg_r < deg_b {
                return None;
            }
            let c = rem.coeff(deg_r) / &lead_b;
            let k = deg_r - deg_b;
            quotient.add_term(k, c.clone());
            rem = &rem - &b.shift(k).scale(&c);
        }
        Some(quotient.shift(lo_a - lo_b))
    }

    /// Render with exponents in `v` when all are even, otherwise in `u`.
    fn variable_and_scale(&self) -> (&'static str, i64) {
        if self.terms.keys().all(|k| k.rem_euclid(2) == 0) {
            ("v", 2)
        } else {
            ("u", 1)
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let (var, unit) = self.variable_and_scale();
        let mut first = true;
        for (k, c) in self.terms.iter().rev() {
            let e = k / unit;
            let negative = c.is_negative();
            let abs = c.abs();
            if first {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            let coeff_str = if abs.is_integer() {
                abs.numer().to_string()
            } else {
                format!("({})", format_rational(&abs))
            };
            match (e, abs.is_one()) {
                (0, _) => write!(f, "{coeff_str}")?,
                (1, true) => write!(f, "{var}")?,
                (1, false) => write!(f, "{coeff_str}*{var}")?,
                (_, true) => write!(f, "{var}^{e}")?,
                (_, false) => write!(f, "{coeff_str}*{var}^{e}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = serializer.serialize_map(Some(self.terms.len()))?;
        for (k, c) in &self.terms {
            map.serialize_entry(&k.to_string(), &format_rational(c))?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw: BTreeMap<String, String> = BTreeMap::deserialize(deserializer)?;
        let mut s = Scalar::zero();
        for (k, c) in raw {
            let k: i64 = k
                .parse()
                .map_err(|_| D::Error::custom(format!("bad exponent {k:?}")))?;
            let c = parse_rational(&c)
                .ok_or_else(|| D::Error::custom(format!("bad rational {c:?}")))?;
            s.add_term(k, c);
        }
        Ok(s)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl Add<&Scalar> for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(*k, c.clone());
        }
        out
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        &self + &rhs
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        for (k, c) in &rhs.terms {
            self.add_term(*k, c.clone());
        }
    }
}

impl Sub<&Scalar> for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(*k, -c.clone());
        }
        out
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            terms: self.terms.iter().map(|(k, c)| (*k, -c.clone())).collect(),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl Mul<&Scalar> for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        let mut out = Scalar::zero();
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                out.add_term(a + b, x * y);
            }
        }
        out
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

/// `[n]_v = v^{n-1} + v^{n-3} + ... + v^{1-n}`.
pub fn quantum_int(n: u32) -> Scalar {
    let n = i64::from(n);
    let mut s = Scalar::zero();
    for k in 0..n {
        s.add_term(2 * (n - 1 - 2 * k), Rational::one());
    }
    s
}

/// `[n]!_v = [1]_v [2]_v ... [n]_v`, with `[0]! = 1`.
pub fn quantum_factorial(n: u32) -> Scalar {
    (1..=n).fold(Scalar::one(), |acc, k| &acc * &quantum_int(k))
}

/// Balanced Gaussian binomial `[m choose n]_v`, symmetric under `v -> v^{-1}`.
///
/// Built from the recurrence `[m, n] = v^{-n} [m-1, n] + v^{m-n} [m-1, n-1]`.
pub fn quantum_binomial(m: u32, n: u32) -> Result<Scalar> {
    if n > m {
        return Err(Error::Domain(format!(
            "quantum binomial needs m >= n, got m = {m}, n = {n}"
        )));
    }
    // row[k] holds [r choose k] for the current r.
    let mut row = vec![Scalar::one()];
    for r in 1..=m as i64 {
        let mut next = Vec::with_capacity(row.len() + 1);
        for k in 0..=r {
            let mut entry = Scalar::zero();
            if k < r {
                entry += &(&Scalar::v_pow(-k) * &row[k as usize]);
            }
            if k > 0 {
                entry += &(&Scalar::v_pow(r - k) * &row[k as usize - 1]);
            }
            next.push(entry);
        }
        row = next;
    }
    Ok(row.swap_remove(n as usize))
}

/// An element `c0 + c1 u + c2 u^2 + c3 u^3` of the field `Q[u]/(u^4 - q)`.
///
/// `u^4 - q` is Eisenstein at `q`, so this is a field and equality is
/// componentwise.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct EvaluatedScalar {
    q: u64,
    c: [Rational; 4],
}

impl EvaluatedScalar {
    pub fn zero(q: u64) -> Self {
        Self {
            q,
            c: [
                Rational::zero(),
                Rational::zero(),
                Rational::zero(),
                Rational::zero(),
            ],
        }
    }

    pub fn one(q: u64) -> Self {
        Self::from_rational(q, Rational::one())
    }

    pub fn from_int(q: u64, n: i64) -> Self {
        Self::from_rational(q, rational_int(n))
    }

    pub fn from_rational(q: u64, r: Rational) -> Self {
        let mut out = Self::zero(q);
        out.c[0] = r;
        out
    }

    pub fn from_components(q: u64, c: [Rational; 4]) -> Self {
        Self { q, c }
    }

    /// `u^k`, with `u^4 = q`.
    pub fn u_pow(q: u64, k: i64) -> Self {
        let mut out = Self::zero(q);
        let r = k.rem_euclid(4);
        let e = k.div_euclid(4);
        let qr = rational_int(q as i64);
        out.c[r as usize] = if e >= 0 {
            num_traits::pow(qr, e as usize)
        } else {
            num_traits::pow(qr, (-e) as usize).recip()
        };
        out
    }

    pub fn v_pow(q: u64, k: i64) -> Self {
        Self::u_pow(q, 2 * k)
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn components(&self) -> &[Rational; 4] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.c[0].is_one() && self.c[1..].iter().all(Zero::is_zero)
    }

    /// The value as a rational number, when it lies in `Q`.
    pub fn as_rational(&self) -> Option<&Rational> {
        self.c[1..].iter().all(Zero::is_zero).then_some(&self.c[0])
    }

    pub fn as_integer(&self) -> Option<i64> {
        let r = self.as_rational()?;
        if r.is_integer() {
            r.numer().to_i64()
        } else {
            None
        }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Self {
            q: self.q,
            c: self.c.clone().map(|x| x * r),
        }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        // Solve x * y = 1 as a 4x4 linear system over Q: column j of the
        // matrix is x * u^j.
        let mut cols = Vec::with_capacity(4);
        for j in 0..4 {
            cols.push(self * &Self::u_pow(self.q, j));
        }
        let mut a: Vec<Vec<Rational>> = (0..4)
            .map(|i| {
                let mut row: Vec<Rational> = (0..4).map(|j| cols[j].c[i].clone()).collect();
                row.push(if i == 0 {
                    Rational::one()
                } else {
                    Rational::zero()
                });
                row
            })
            .collect();
        for col in 0..4 {
            let pivot = (col..4).find(|&r| !a[r][col].is_zero())?;
            a.swap(col, pivot);
            let inv = a[col][col].recip();
            for x in a[col].iter_mut() {
                *x *= &inv;
            }
            for r in 0..4 {
                if r != col && !a[r][col].is_zero() {
                    let factor = a[r][col].clone();
                    for k in 0..5 {
                        let sub = &a[col][k] * &factor;
                        a[r][k] -= sub;
                    }
                }
            }
        }
        Some(Self {
            q: self.q,
            c: [
                a[0][4].clone(),
                a[1][4].clone(),
                a[2][4].clone(),
                a[3][4].clone(),
            ],
        })
    }

    fn check_same_field(&self, other: &Self) {
        assert_eq!(self.q, other.q, "mixing evaluations at different q");
    }
}

impl fmt::Debug for EvaluatedScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for EvaluatedScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .c
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                let c = if c.is_integer() {
                    c.numer().to_string()
                } else {
                    format_rational(c)
                };
                match i {
                    0 => c,
                    1 => format!("{c}*u"),
                    _ => format!("{c}*u^{i}"),
                }
            })
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{} (q={})", parts.join(" + "), self.q)
        }
    }
}

#[derive(Serialize, Deserialize)]
struct EvaluatedScalarJson {
    q: u64,
    c: [String; 4],
}

impl Serialize for EvaluatedScalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        EvaluatedScalarJson {
            q: self.q,
            c: self.c.clone().map(|c| format_rational(&c)),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for EvaluatedScalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = EvaluatedScalarJson::deserialize(deserializer)?;
        let mut c = [
            Rational::zero(),
            Rational::zero(),
            Rational::zero(),
            Rational::zero(),
        ];
        for (slot, s) in c.iter_mut().zip(raw.c.iter()) {
            *slot =
                parse_rational(s).ok_or_else(|| D::Error::custom(format!("bad rational {s:?}")))?;
        }
        Ok(Self { q: raw.q, c })
    }
}

impl Add<&EvaluatedScalar> for &EvaluatedScalar {
    type Output = EvaluatedScalar;
    fn add(self, rhs: &EvaluatedScalar) -> EvaluatedScalar {
        self.check_same_field(rhs);
        let mut out = self.clone();
        for i in 0..4 {
            out.c[i] += &rhs.c[i];
        }
        out
    }
}

impl AddAssign<&EvaluatedScalar> for EvaluatedScalar {
    fn add_assign(&mut self, rhs: &EvaluatedScalar) {
        self.check_same_field(rhs);
        for i in 0..4 {
            self.c[i] += &rhs.c[i];
        }
    }
}

impl Sub<&EvaluatedScalar> for &EvaluatedScalar {
    type Output = EvaluatedScalar;
    fn sub(self, rhs: &EvaluatedScalar) -> EvaluatedScalar {
        self.check_same_field(rhs);
        let mut out = self.clone();
        for i in 0..4 {
            out.c[i] -= &rhs.c[i];
        }
        out
    }
}

impl Neg for &EvaluatedScalar {
    type Output = EvaluatedScalar;
    fn neg(self) -> EvaluatedScalar {
        EvaluatedScalar {
            q: self.q,
            c: self.c.clone().map(|x| -x),
        }
    }
}

impl Mul<&EvaluatedScalar> for &EvaluatedScalar {
    type Output = EvaluatedScalar;
    fn mul(self, rhs: &EvaluatedScalar) -> EvaluatedScalar {
        self.check_same_field(rhs);
        let q = rational_int(self.q as i64);
        let mut out = EvaluatedScalar::zero(self.q);
        for i in 0..4 {
            if self.c[i].is_zero() {
                continue;
            }
            for j in 0..4 {
                if rhs.c[j].is_zero() {
                    continue;
                }
                let prod = &self.c[i] * &rhs.c[j];
                if i + j >= 4 {
                    out.c[i + j - 4] += prod * &q;
                } else {
                    out.c[i + j] += prod;
                }
            }
        }
        out
    }
}

/// Image of `a` in `Q[u]/(u^4 - q)`: `u^k` maps to `u^{k mod 4} q^{floor(k/4)}`.
pub fn evaluate(a: &Scalar, q: u64) -> Result<EvaluatedScalar> {
    if !is_prime(q) {
        return Err(Error::Domain(format!("q = {q} is not prime")));
    }
    let mut out = EvaluatedScalar::zero(q);
    for (k, c) in a.terms() {
        out += &EvaluatedScalar::u_pow(q, k).scale(c);
    }
    Ok(out)
}
