//! Expression syntax:
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := factor ("*" factor)*
//! factor := "-" factor | atom ("^" ("(" INT ")" | ["-"] INT))?
//! atom   := "E[" INT "," INT "]" | "c[" INT "," INT "]" | "det" | "detinv"
//!         | "v" | INT | "(" expr ")"
//! ```
//!
//! Negative exponents are accepted on `v` and `det` only; `x^(m)` is the
//! divided power of a generator.

use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::qalgebra::{determinant, Kind, NCPoly};
use crate::scalar::{quantum_factorial, rational_int, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Int(BigInt),
    V,
    /// `E[i,j]` (`dd = false`) or `c[i,j]`.
    Gen {
        dd: bool,
        row: usize,
        col: usize,
    },
    Det,
    DetInv,
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, i64),
    Divided(Box<Expr>, u32),
}

impl Expr {
    fn level(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) => 2,
            Expr::Neg(..) => 3,
            Expr::Pow(..) | Expr::Divided(..) => 4,
            _ => 5,
        }
    }

    /// Largest generator index, for inferring `n`.
    pub fn max_index(&self) -> usize {
        match self {
            Expr::Gen { row, col, .. } => (*row).max(*col),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => a.max_index().max(b.max_index()),
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Divided(a, _) => a.max_index(),
            _ => 0,
        }
    }

    fn visit_gens(&self, f: &mut impl FnMut(bool, usize, usize)) {
        match self {
            Expr::Gen { dd, row, col } => f(*dd, *row, *col),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
                a.visit_gens(f);
                b.visit_gens(f);
            }
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Divided(a, _) => a.visit_gens(f),
            _ => {}
        }
    }

    pub fn uses_dd_atoms(&self) -> bool {
        let mut any = false;
        self.visit_gens(&mut |dd, _, _| any |= dd);
        any
    }

    pub fn uses_frt_atoms(&self) -> bool {
        let mut any = false;
        self.visit_gens(&mut |dd, _, _| any |= !dd);
        any
    }

    pub fn check_indices(&self, n: usize) -> Result<()> {
        let mut bad = None;
        self.visit_gens(&mut |_, row, col| {
            if bad.is_none() && (row == 0 || col == 0 || row > n || col > n) {
                bad = Some((row, col));
            }
        });
        match bad {
            Some((row, col)) => Err(Error::IndexOutOfRange { row, col, n }),
            None => Ok(()),
        }
    }
}

fn wrap(e: &Expr, min_level: u8) -> String {
    if e.level() < min_level {
        format!("({e})")
    } else {
        e.to_string()
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Int(k) => write!(f, "{k}"),
            Expr::V => write!(f, "v"),
            Expr::Gen { dd, row, col } => write!(f, "{}[{row},{col}]", if *dd { "c" } else { "E" }),
            Expr::Det => write!(f, "det"),
            Expr::DetInv => write!(f, "detinv"),
            Expr::Add(a, b) => write!(f, "{} + {}", wrap(a, 1), wrap(b, 2)),
            Expr::Sub(a, b) => write!(f, "{} - {}", wrap(a, 1), wrap(b, 2)),
            Expr::Mul(a, b) => write!(f, "{} * {}", wrap(a, 2), wrap(b, 3)),
            Expr::Neg(a) => write!(f, "-{}", wrap(a, 3)),
            Expr::Pow(a, e) => write!(f, "{}^{e}", wrap(a, 5)),
            Expr::Divided(a, m) => write!(f, "{}^({m})", wrap(a, 5)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let value: BigInt = text[start..i].parse().expect("digits");
            out.push((start, Tok::Int(value)));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_alphanumeric() {
                i += 1;
            }
            out.push((start, Tok::Ident(text[start..i].to_string())));
        } else if b"+-*^()[],".contains(&c) {
            out.push((i, Tok::Sym(c as char)));
            i += 1;
        } else {
            let ch = text[i..].chars().next().expect("char");
            return Err(syntax(i, format!("unexpected character {ch:?}")));
        }
    }
    Ok(out)
}

fn syntax(offset: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        offset,
        message: message.into(),
    }
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(o, _)| *o).unwrap_or(self.end)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(syntax(self.offset(), format!("expected {c:?}")))
        }
    }

    fn int(&mut self) -> Result<BigInt> {
        match self.peek() {
            Some(Tok::Int(k)) => {
                let k = k.clone();
                self.pos += 1;
                Ok(k)
            }
            _ => Err(syntax(self.offset(), "expected an integer")),
        }
    }

    fn small(&mut self) -> Result<i64> {
        let at = self.offset();
        let k = self.int()?;
        i64::try_from(k).map_err(|_| syntax(at, "integer too large"))
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = Expr::Add(Box::new(acc), Box::new(self.term()?));
            } else if self.eat('-') {
                acc = Expr::Sub(Box::new(acc), Box::new(self.term()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut acc = self.factor()?;
        while self.eat('*') {
            acc = Expr::Mul(Box::new(acc), Box::new(self.factor()?));
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        let at = self.offset();
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        if self.eat('(') {
            let m = self.small()?;
            self.expect(')')?;
            if !matches!(base, Expr::Gen { .. }) {
                return Err(syntax(at, "divided powers apply to generators only"));
            }
            let m = u32::try_from(m).map_err(|_| syntax(at, "divided power out of range"))?;
            return Ok(Expr::Divided(Box::new(base), m));
        }
        let exp_at = self.offset();
        let negative = self.eat('-');
        let e = self.small()?;
        let e = if negative { -e } else { e };
        if e < 0 && !matches!(base, Expr::V | Expr::Det) {
            return Err(syntax(exp_at, "negative exponents apply to v and det only"));
        }
        if e.unsigned_abs() > 10_000 {
            return Err(syntax(exp_at, "exponent too large"));
        }
        Ok(Expr::Pow(Box::new(base), e))
    }

    fn atom(&mut self) -> Result<Expr> {
        let at = self.offset();
        match self.peek().cloned() {
            Some(Tok::Int(k)) => {
                self.pos += 1;
                Ok(Expr::Int(k))
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                match name.as_str() {
                    "v" => Ok(Expr::V),
                    "det" => Ok(Expr::Det),
                    "detinv" => Ok(Expr::DetInv),
                    "E" | "c" => {
                        self.expect('[')?;
                        let row = self.small()?;
                        self.expect(',')?;
                        let col = self.small()?;
                        self.expect(']')?;
                        let idx = |k: i64| {
                            usize::try_from(k).map_err(|_| syntax(at, "index out of range"))
                        };
                        Ok(Expr::Gen {
                            dd: name == "c",
                            row: idx(row)?,
                            col: idx(col)?,
                        })
                    }
                    _ => Err(syntax(at, format!("unknown atom {name:?}"))),
                }
            }
            Some(Tok::Sym(c)) => Err(syntax(at, format!("unexpected {c:?}"))),
            None => Err(syntax(at, "unexpected end of input")),
        }
    }
}

/// Parse and, when `n` is given, check every generator index against it.
pub fn parse_expression(text: &str, n: Option<usize>) -> Result<Expr> {
    let mut p = Parser {
        toks: tokenize(text)?,
        pos: 0,
        end: text.len(),
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(syntax(p.offset(), "trailing input"));
    }
    if let Some(n) = n {
        e.check_indices(n)?;
    }
    Ok(e)
}

/// `numerator / denominator · det^{-det_power}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Value {
    pub numerator: NCPoly,
    pub denominator: Scalar,
    pub det_power: u32,
}

impl Value {
    fn poly(p: NCPoly) -> Self {
        Self {
            numerator: p,
            denominator: Scalar::one(),
            det_power: 0,
        }
    }

    fn raise(&self, k: u32) -> Result<NCPoly> {
        let det = determinant(self.numerator.kind(), self.numerator.n());
        let mut out = self.numerator.clone();
        for _ in 0..k {
            out = out.multiply(&det)?;
        }
        Ok(out)
    }

    fn add(&self, other: &Value, sign: i64) -> Result<Value> {
        let k = self.det_power.max(other.det_power);
        let a = self.raise(k - self.det_power)?.scale(&other.denominator);
        let b = other
            .raise(k - other.det_power)?
            .scale(&self.denominator)
            .scale(&Scalar::from_int(sign));
        Ok(Value {
            numerator: a.add(&b)?,
            denominator: &self.denominator * &other.denominator,
            det_power: k,
        })
    }

    fn mul(&self, other: &Value) -> Result<Value> {
        Ok(Value {
            numerator: self.numerator.multiply(&other.numerator)?,
            denominator: &self.denominator * &other.denominator,
            det_power: self.det_power + other.det_power,
        })
    }

    /// Cancel `det` factors that the numerator visibly carries, and divide
    /// out the denominator when it divides every coefficient.
    fn tidy(mut self) -> Value {
        if let Some(p) = (crate::qalgebra::DividedMonomial {
            numerator: self.numerator.clone(),
            denominator: self.denominator.clone(),
        })
        .to_poly()
        {
            self.numerator = p;
            self.denominator = Scalar::one();
        }
        if self.numerator.is_zero() {
            self.det_power = 0;
            self.denominator = Scalar::one();
        }
        self
    }
}

/// Evaluate in the algebra of the given kind, normal-forming as we go.
pub fn evaluate_expression(e: &Expr, kind: Kind, n: usize) -> Result<Value> {
    e.check_indices(n)?;
    if kind == Kind::Frt && e.uses_dd_atoms() {
        return Err(Error::Mismatch(
            "c[i,j] atoms need the Dipper-Donkin presentation".into(),
        ));
    }
    Ok(eval(e, kind, n)?.tidy())
}

fn eval(e: &Expr, kind: Kind, n: usize) -> Result<Value> {
    let scalar = |s: Scalar| Value::poly(NCPoly::scalar(kind, n, s));
    Ok(match e {
        Expr::Int(k) => scalar(Scalar::from_rational(rational_int(k.clone()))),
        Expr::V => scalar(Scalar::v()),
        Expr::Gen { row, col, .. } => Value::poly(NCPoly::generator(kind, n, *row, *col)?),
        Expr::Det => Value::poly(determinant(kind, n)),
        Expr::DetInv => {
            if kind == Kind::Dd {
                return Err(Error::Unsupported(
                    "det^-1 is available in the FRT algebra only".into(),
                ));
            }
            Value {
                numerator: NCPoly::one(kind, n),
                denominator: Scalar::one(),
                det_power: 1,
            }
        }
        Expr::Add(a, b) => eval(a, kind, n)?.add(&eval(b, kind, n)?, 1)?,
        Expr::Sub(a, b) => eval(a, kind, n)?.add(&eval(b, kind, n)?, -1)?,
        Expr::Mul(a, b) => eval(a, kind, n)?.mul(&eval(b, kind, n)?)?,
        Expr::Neg(a) => {
            let mut x = eval(a, kind, n)?;
            x.numerator = x.numerator.scale(&Scalar::from_int(-1));
            x
        }
        Expr::Pow(a, k) => match (a.as_ref(), *k) {
            (Expr::V, k) => scalar(Scalar::v_pow(k)),
            (Expr::Det, k) if k < 0 => eval(&Expr::Pow(Box::new(Expr::DetInv), -k), kind, n)?,
            (_, k) => {
                let base = eval(a, kind, n)?;
                let mut acc = scalar(Scalar::one());
                for _ in 0..k {
                    acc = acc.mul(&base)?;
                }
                acc
            }
        },
        Expr::Divided(a, m) => {
            let base = eval(a, kind, n)?;
            Value {
                numerator: base.numerator.pow(*m),
                denominator: quantum_factorial(*m),
                det_power: 0,
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinant_expression() {
        let e = parse_expression("E[1,1]*E[2,2] - v^-1 * E[1,2]*E[2,1]", Some(2)).unwrap();
        let x = evaluate_expression(&e, Kind::Frt, 2).unwrap();
        assert_eq!(x.numerator, determinant(Kind::Frt, 2));
        assert_eq!(e.to_string(), "E[1,1] * E[2,2] - v^-1 * E[1,2] * E[2,1]");
    }

    #[test]
    fn divided_power_atom() {
        let e = parse_expression("E[1,2]^(3)", Some(2)).unwrap();
        assert_eq!(
            e,
            Expr::Divided(
                Box::new(Expr::Gen {
                    dd: false,
                    row: 1,
                    col: 2
                }),
                3
            )
        );
        let x = evaluate_expression(&e, Kind::Frt, 2).unwrap();
        assert_eq!(x.denominator, quantum_factorial(3));
    }

    #[test]
    fn errors_carry_offsets() {
        assert!(matches!(
            parse_expression("E[1,3]", Some(2)),
            Err(Error::IndexOutOfRange {
                row: 1,
                col: 3,
                n: 2
            })
        ));
        match parse_expression("E[1,1] + * E[2,2]", None) {
            Err(Error::Syntax { offset, .. }) => assert_eq!(offset, 9),
            other => panic!("{other:?}"),
        }
        match parse_expression("E[1,1] $", None) {
            Err(Error::Syntax { offset, .. }) => assert_eq!(offset, 7),
            other => panic!("{other:?}"),
        }
        assert!(parse_expression("E[1,1]^-1", None).is_err());
        assert!(parse_expression("(E[1,1]*E[2,2])^(2)", None).is_err());
        assert!(parse_expression("", None).is_err());
        assert!(parse_expression("E[1,1])", None).is_err());
    }

    #[test]
    fn detinv_cancels() {
        let e = parse_expression("det * detinv", Some(2)).unwrap();
        let x = evaluate_expression(&e, Kind::Frt, 2).unwrap();
        assert_eq!(x.det_power, 1);
        assert_eq!(x.numerator, determinant(Kind::Frt, 2));
    }

    #[test]
    fn printer_round_trip_examples() {
        for s in [
            "E[1,1] - (E[1,2] - E[2,1])",
            "-(E[1,1] + 2) * c[2,1]^3",
            "(v * E[1,1])^2 * det^-2",
            "E[1,1] * (E[1,2] * E[2,1])",
            "--v",
        ] {
            let e = parse_expression(s, None).unwrap();
            assert_eq!(parse_expression(&e.to_string(), None).unwrap(), e, "{s}");
        }
    }
}
