//! Oriented defining relations and the reduction loop.
//!
//! Each relation is read as a rule `a b -> sum of c * x y` for an adjacent
//! inversion `a > b`. Every word on the right-hand side is strictly smaller
//! than `a b` in the lexicographic order on words of equal length, so
//! reduction terminates.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{GeneratorIndex, Kind, NCPoly, Word};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const DEFAULT_STEP_LIMIT: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Always rewrite the leftmost inversion.
    Leftmost,
    /// Rewrite a uniformly chosen inversion, driven by a seeded generator.
    Random(u64),
}

#[derive(Clone, Debug)]
pub struct Reduction {
    pub result: NCPoly,
    pub steps: usize,
}

/// Rewrite the adjacent pair `a b` with `a > b`.
///
/// Returns `(coefficient, first, second)` triples; `None` when `a <= b`.
pub fn rewrite_pair(
    kind: Kind,
    a: GeneratorIndex,
    b: GeneratorIndex,
) -> Option<Vec<(Scalar, GeneratorIndex, GeneratorIndex)>> {
    if a <= b {
        return None;
    }
    let (p, q) = (a.row, a.col);
    let (r, s) = (b.row, b.col);
    let g = |row, col| GeneratorIndex { row, col };
    let v = Scalar::v();
    let out = match kind {
        Kind::Frt => {
            if p == r {
                // E_ik E_il = v E_il E_ik, k > l
                vec![(v, b, a)]
            } else if q == s {
                // E_ik E_jk = v E_jk E_ik, i > j
                vec![(v, b, a)]
            } else if q < s {
                // E_ik E_jl = E_jl E_ik, i > j, k < l
                vec![(Scalar::one(), b, a)]
            } else {
                // E_ik E_jl = E_jl E_ik + (v - v^-1) E_jk E_il, i > j, k > l
                vec![
                    (Scalar::one(), b, a),
                    (&v - &Scalar::v_pow(-1), g(r, q), g(p, s)),
                ]
            }
        }
        Kind::Dd => {
            if p == r {
                // c_ik c_il = c_il c_ik
                vec![(Scalar::one(), b, a)]
            } else if q <= s {
                // c_ik c_jl = v c_jl c_ik, i > j, k <= l
                vec![(v, b, a)]
            } else {
                // c_ik c_jl = c_jl c_ik + (v - 1) c_jk c_il, i > j, k > l
                vec![
                    (Scalar::one(), b, a),
                    (&v - &Scalar::one(), g(r, q), g(p, s)),
                ]
            }
        }
    };
    Some(out)
}

pub(super) fn reduce(x: &NCPoly, strategy: Strategy, step_limit: usize) -> Result<Reduction> {
    let kind = x.kind();
    let n = x.n();
    let mut rng = match strategy {
        Strategy::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        Strategy::Leftmost => None,
    };
    // Processing the largest pending word first means every word is handled
    // once: rewrites only produce smaller words.
    let mut pending = x.clone().into_terms();
    let mut done = NCPoly::zero(kind, n);
    let mut steps = 0usize;
    while let Some((word, coeff)) = pending.pop_last() {
        let positions: Vec<usize> = word.inversion_positions().collect();
        let pos = match (positions.is_empty(), rng.as_mut()) {
            (true, _) => {
                done.add_term(word, coeff);
                continue;
            }
            (false, None) => positions[0],
            (false, Some(rng)) => *positions.choose(rng).expect("non-empty"),
        };
        steps += 1;
        if steps > step_limit {
            return Err(Error::Domain(format!(
                "reduction exceeded {step_limit} rewrite steps"
            )));
        }
        let letters = word.letters();
        let rule = rewrite_pair(kind, letters[pos], letters[pos + 1]).expect("inversion");
        for (c, first, second) in rule {
            let mut v = letters.to_vec();
            v[pos] = first;
            v[pos + 1] = second;
            let c = &coeff * &c;
            let entry = pending.entry(Word(v)).or_default();
            *entry += &c;
        }
        pending.retain(|_, c| !c.is_zero());
    }
    Ok(Reduction {
        result: done,
        steps,
    })
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

    fn nf(kind: Kind, n: usize, letters: &[(usize, usize)]) -> NCPoly {
        NCPoly::from_word(kind, n, word(letters), Scalar::one()).normal_form()
    }

    #[test]
    fn frt_commuting_pair() {
        let p = nf(Kind::Frt, 2, &[(2, 1), (1, 2)]);
        assert_eq!(p.len(), 1);
        assert_eq!(p.coeff(&word(&[(1, 2), (2, 1)])), Scalar::one());
    }

    #[test]
    fn frt_correction_term() {
        let p = nf(Kind::Frt, 2, &[(2, 2), (1, 1)]);
        assert_eq!(p.len(), 2);
        assert_eq!(p.coeff(&word(&[(1, 1), (2, 2)])), Scalar::one());
        assert_eq!(
            p.coeff(&word(&[(1, 2), (2, 1)])),
            &Scalar::v() - &Scalar::v_pow(-1)
        );
    }

    #[test]
    fn dd_column_relation() {
        let p = nf(Kind::Dd, 2, &[(2, 1), (1, 1)]);
        assert_eq!(p.len(), 1);
        assert_eq!(p.coeff(&word(&[(1, 1), (2, 1)])), Scalar::v());
    }

    #[test]
    fn dd_rows_commute() {
        let p = nf(Kind::Dd, 3, &[(2, 3), (2, 1)]);
        assert_eq!(p.coeff(&word(&[(2, 1), (2, 3)])), Scalar::one());
    }

    #[test]
    fn every_rule_decreases_word_order() {
        for kind in [Kind::Frt, Kind::Dd] {
            for a_r in 1..=3 {
                for a_c in 1..=3 {
                    for b_r in 1..=3 {
                        for b_c in 1..=3 {
                            let a = GeneratorIndex::new(a_r, a_c);
                            let b = GeneratorIndex::new(b_r, b_c);
                            match rewrite_pair(kind, a, b) {
                                None => assert!(a <= b),
                                Some(rule) => {
                                    for (_, x, y) in rule {
                                        assert!((x, y) < (a, b));
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn step_limit_is_enforced() {
        let x = NCPoly::from_word(Kind::Frt, 3, word(&[(3, 3), (2, 2), (1, 1)]), Scalar::one());
        assert!(x.normal_form_with(Strategy::Leftmost, 1).is_err());
        let r = x
            .normal_form_with(Strategy::Leftmost, DEFAULT_STEP_LIMIT)
            .unwrap();
        assert!(r.steps > 1);
        assert!(r.result.is_normal());
    }
}
