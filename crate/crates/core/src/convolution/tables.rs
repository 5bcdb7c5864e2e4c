//! The `n = 2` relation tables: for each ordered pair of generators the
//! twist shift and the raw count on every orbit of the target.

use serde::Serialize;

use super::Product;
use crate::error::Result;
use crate::flaggeo::{twist_exponents, FlagGeometry, MatrixType};

/// `a·q + b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LinearInQ {
    pub a: i64,
    pub b: i64,
}

impl LinearInQ {
    pub const ZERO: LinearInQ = LinearInQ { a: 0, b: 0 };
    pub const ONE: LinearInQ = LinearInQ { a: 0, b: 1 };
    pub const Q: LinearInQ = LinearInQ { a: 1, b: 0 };
    pub const Q_MINUS_ONE: LinearInQ = LinearInQ { a: 1, b: -1 };

    pub fn at(self, q: u64) -> i64 {
        self.a * q as i64 + self.b
    }
}

/// One column of a table: `left ⋆ right` with its shift and counts.
#[derive(Clone, Debug, Serialize)]
pub struct TableColumn {
    pub table: &'static str,
    /// `Circ` columns hold `g`-counts, `Dot` columns `h`-counts.
    #[serde(skip)]
    pub product: Product,
    pub left: MatrixType,
    pub right: MatrixType,
    pub shift: i64,
    pub values: Vec<(MatrixType, LinearInQ)>,
}

/// What the geometry actually gives for a column.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ColumnObservation {
    pub shift: i64,
    pub values: Vec<(MatrixType, i64)>,
}

fn e(i: usize, j: usize) -> MatrixType {
    MatrixType::unit(2, i, j)
}

fn pair(a: (usize, usize), b: (usize, usize)) -> MatrixType {
    e(a.0, a.1).add(&e(b.0, b.1))
}

fn column(
    table: &'static str,
    product: Product,
    left: (usize, usize),
    right: (usize, usize),
    shift: i64,
    values: Vec<(MatrixType, LinearInQ)>,
) -> TableColumn {
    TableColumn {
        table,
        product,
        left: e(left.0, left.1),
        right: e(right.0, right.1),
        shift,
        values,
    }
}

/// The four `∘` tables (`g`-counts, shift `f1 - f2`).
pub fn circ_tables() -> Vec<TableColumn> {
    use LinearInQ as L;
    let diag = pair((1, 1), (2, 2));
    let anti = pair((1, 2), (2, 1));
    let p = Product::Circ;
    let mut out = vec![
        column(
            "commuting",
            p,
            (1, 2),
            (2, 1),
            2,
            vec![(diag.clone(), L::ZERO), (anti.clone(), L::ONE)],
        ),
        column(
            "commuting",
            p,
            (2, 1),
            (1, 2),
            2,
            vec![(diag.clone(), L::ZERO), (anti.clone(), L::ONE)],
        ),
        column(
            "crossing",
            p,
            (1, 1),
            (2, 2),
            1,
            vec![(diag.clone(), L::ONE), (anti.clone(), L::ZERO)],
        ),
        column(
            "crossing",
            p,
            (2, 2),
            (1, 1),
            3,
            vec![(diag.clone(), L::Q), (anti.clone(), L::Q_MINUS_ONE)],
        ),
        column(
            "crossing",
            p,
            (1, 2),
            (2, 1),
            2,
            vec![(diag, L::ZERO), (anti, L::ONE)],
        ),
    ];
    for i in 1..=2 {
        let target = pair((i, 1), (i, 2));
        out.push(column(
            "same-row",
            p,
            (i, 1),
            (i, 2),
            1,
            vec![(target.clone(), L::ONE)],
        ));
        out.push(column(
            "same-row",
            p,
            (i, 2),
            (i, 1),
            2,
            vec![(target, L::Q)],
        ));
    }
    for k in 1..=2 {
        let target = pair((1, k), (2, k));
        out.push(column(
            "same-column",
            p,
            (1, k),
            (2, k),
            1,
            vec![(target.clone(), L::ONE)],
        ));
        out.push(column(
            "same-column",
            p,
            (2, k),
            (1, k),
            2,
            vec![(target, L::Q)],
        ));
    }
    out
}

/// The four `·` tables (`h`-counts, the `dot` shift).
pub fn dot_tables() -> Vec<TableColumn> {
    use LinearInQ as L;
    let diag = pair((1, 1), (2, 2));
    let anti = pair((1, 2), (2, 1));
    let p = Product::Dot;
    let mut out = vec![
        column(
            "commuting",
            p,
            (2, 1),
            (1, 2),
            -1,
            vec![(diag.clone(), L::ZERO), (anti.clone(), L::ONE)],
        ),
        column(
            "commuting",
            p,
            (1, 2),
            (2, 1),
            1,
            vec![(diag.clone(), L::ZERO), (anti.clone(), L::Q)],
        ),
        column(
            "crossing",
            p,
            (1, 1),
            (2, 2),
            0,
            vec![(diag.clone(), L::ONE), (anti.clone(), L::ZERO)],
        ),
        column(
            "crossing",
            p,
            (2, 2),
            (1, 1),
            0,
            vec![(diag.clone(), L::ONE), (anti.clone(), L::Q_MINUS_ONE)],
        ),
        column(
            "crossing",
            p,
            (1, 2),
            (2, 1),
            1,
            vec![(diag, L::ZERO), (anti, L::Q)],
        ),
    ];
    for i in 1..=2 {
        let target = pair((i, 1), (i, 2));
        out.push(column(
            "same-row",
            p,
            (i, 1),
            (i, 2),
            0,
            vec![(target.clone(), L::ONE)],
        ));
        out.push(column(
            "same-row",
            p,
            (i, 2),
            (i, 1),
            1,
            vec![(target, L::Q)],
        ));
    }
    for k in 1..=2 {
        let target = pair((1, k), (2, k));
        out.push(column(
            "same-column",
            p,
            (1, k),
            (2, k),
            0,
            vec![(target.clone(), L::ONE)],
        ));
        out.push(column(
            "same-column",
            p,
            (2, k),
            (1, k),
            -1,
            vec![(target, L::ONE)],
        ));
    }
    out
}

impl TableColumn {
    pub fn expected(&self, q: u64) -> ColumnObservation {
        ColumnObservation {
            shift: self.shift,
            values: self
                .values
                .iter()
                .map(|(m, v)| (m.clone(), v.at(q)))
                .collect(),
        }
    }

    pub fn observe(&self, geo: &FlagGeometry) -> Result<ColumnObservation> {
        let tw = twist_exponents(&self.left, &self.right);
        let shift = match self.product {
            Product::Circ | Product::CircPrime => tw.circ,
            Product::Dot => tw.dot,
            Product::Bullet => 0,
        };
        let mut values = Vec::new();
        for (m, _) in &self.values {
            let count = match self.product {
                Product::Circ | Product::CircPrime => {
                    geo.structure_g(m, &self.left, &self.right)?
                }
                Product::Dot | Product::Bullet => geo.structure_h(m, &self.left, &self.right)?,
            };
            values.push((m.clone(), count as i64));
        }
        Ok(ColumnObservation { shift, values })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tables_match_at_small_primes() {
        for q in [2u64, 3] {
            let geo = FlagGeometry::new(q).unwrap();
            for col in circ_tables().iter().chain(dot_tables().iter()) {
                assert_eq!(
                    col.observe(&geo).unwrap(),
                    col.expected(q),
                    "{col:?} at q = {q}"
                );
            }
        }
    }
}
