use std::sync::OnceLock;

use proptest::prelude::*;

use qgl::cli::{parse_expression, Expr};
use qgl::convolution::{Convolution, KElement, Product};
use qgl::flaggeo::{enumerate_flags, general_linear_group, CompositionType, FlagPair, MatrixType};
use qgl::qalgebra::{
    GeneratorIndex, Kind, NCPoly, Strategy as Rewriting, Word, DEFAULT_STEP_LIMIT,
};
use qgl::scalar::{evaluate, rational, Scalar};

fn scalar() -> impl Strategy<Value = Scalar> {
    prop::collection::vec((-6i64..=6, -8i64..=8, 1i64..=3), 0..4).prop_map(|terms| {
        terms
            .into_iter()
            .fold(Scalar::zero(), |acc, (k, num, den)| {
                &acc + &Scalar::monomial(rational(num, den), k)
            })
    })
}

fn kind() -> impl Strategy<Value = Kind> {
    prop_oneof![Just(Kind::Frt), Just(Kind::Dd)]
}

fn word(n: usize, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((1..=n, 1..=n), 0..=max_len).prop_map(|v| {
        Word(
            v.into_iter()
                .map(|(i, j)| GeneratorIndex::new(i, j))
                .collect(),
        )
    })
}

fn poly(kind: Kind, n: usize, w: Word) -> NCPoly {
    NCPoly::from_word(kind, n, w, Scalar::one())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn evaluation_is_a_ring_homomorphism(a in scalar(), b in scalar(), q in prop_oneof![Just(2u64), Just(3), Just(5)]) {
        let (ea, eb) = (evaluate(&a, q).unwrap(), evaluate(&b, q).unwrap());
        prop_assert_eq!(evaluate(&(&a * &b), q).unwrap(), &ea * &eb);
        prop_assert_eq!(evaluate(&(&a + &b), q).unwrap(), &ea + &eb);
    }

    #[test]
    fn bar_and_square_parameter_are_multiplicative(a in scalar(), b in scalar()) {
        prop_assert_eq!((&a * &b).bar(), &a.bar() * &b.bar());
        prop_assert_eq!((&a * &b).square_parameter(), &a.square_parameter() * &b.square_parameter());
        prop_assert_eq!(a.bar().bar(), a);
    }

    #[test]
    fn rewriting_is_confluent(k in kind(), n in 1usize..=3, w in word(3, 6), seed in any::<u64>()) {
        let w = Word(w.0.into_iter().filter(|g| g.row() <= n && g.col() <= n).collect());
        let p = poly(k, n, w);
        let a = p.normal_form_with(Rewriting::Leftmost, DEFAULT_STEP_LIMIT).unwrap();
        let b = p.normal_form_with(Rewriting::Random(seed), DEFAULT_STEP_LIMIT).unwrap();
        prop_assert!(a.steps <= DEFAULT_STEP_LIMIT && b.steps <= DEFAULT_STEP_LIMIT);
        prop_assert!(a.result.is_normal());
        prop_assert_eq!(a.result, b.result);
    }

    #[test]
    fn multiplication_is_associative(k in kind(), x in word(2, 3), y in word(2, 3), z in word(2, 3)) {
        let (x, y, z) = (poly(k, 2, x), poly(k, 2, y), poly(k, 2, z));
        let left = x.multiply(&y).unwrap().multiply(&z).unwrap();
        let right = x.multiply(&y.multiply(&z).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn coproduct_is_multiplicative(k in kind(), x in word(2, 2), y in word(2, 2)) {
        let (x, y) = (poly(k, 2, x), poly(k, 2, y));
        let lhs = x.multiply(&y).unwrap().comultiply();
        let rhs = x.comultiply().multiply(&y.comultiply());
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(x.multiply(&y).unwrap().counit(), &x.counit() * &y.counit());
    }
}

fn flags(t: &[u32], q: u64) -> Vec<qgl::flaggeo::Flag> {
    enumerate_flags(&CompositionType::new(t.to_vec()), q).unwrap()
}

fn gl3(q: u64) -> &'static Vec<Vec<Vec<u8>>> {
    static G2: OnceLock<Vec<Vec<Vec<u8>>>> = OnceLock::new();
    static G3: OnceLock<Vec<Vec<Vec<u8>>>> = OnceLock::new();
    let cell = if q == 2 { &G2 } else { &G3 };
    cell.get_or_init(|| general_linear_group(3, q).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn orbit_type_is_gl_invariant(q in prop_oneof![Just(2u64), Just(3)], a in any::<prop::sample::Index>(), b in any::<prop::sample::Index>(), g in any::<prop::sample::Index>()) {
        let vs = flags(&[1, 0, 2], q);
        let fs = flags(&[2, 0, 1], q);
        let pair = FlagPair::new(a.get(&vs).clone(), b.get(&fs).clone()).unwrap();
        let m = pair.orbit_type();
        prop_assert_eq!(m.ro(), CompositionType::new(vec![1, 0, 2]));
        prop_assert_eq!(m.co(), CompositionType::new(vec![2, 0, 1]));
        let g = g.get(gl3(q));
        prop_assert_eq!(pair.transform(g).orbit_type(), m);
    }
}

fn k2() -> &'static Convolution {
    static K: OnceLock<Convolution> = OnceLock::new();
    K.get_or_init(|| Convolution::new(2).unwrap())
}

fn theta_upto(d: u32) -> Vec<MatrixType> {
    (0..=d).flat_map(|k| MatrixType::theta(2, k)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn convolution_products_are_associative(
        a in any::<prop::sample::Index>(),
        b in any::<prop::sample::Index>(),
        c in any::<prop::sample::Index>(),
        p in prop_oneof![Just(Product::Circ), Just(Product::Dot), Just(Product::Bullet)],
    ) {
        let small = theta_upto(1);
        let (a, b, c) = (a.get(&small), b.get(&small), c.get(&small));
        let k = k2();
        let x = |m: &MatrixType| KElement::basis(m.clone(), 2);
        let left = k.k_multiply(&k.k_multiply(&x(a), &x(b), p).unwrap(), &x(c), p).unwrap();
        let right = k.k_multiply(&x(a), &k.k_multiply(&x(b), &x(c), p).unwrap(), p).unwrap();
        prop_assert_eq!(left, right);
    }
}

fn expr(n: usize) -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (0u32..20).prop_map(|k| Expr::Int(k.into())),
        Just(Expr::V),
        Just(Expr::Det),
        Just(Expr::DetInv),
        (any::<bool>(), 1..=n, 1..=n).prop_map(|(dd, row, col)| Expr::Gen { dd, row, col }),
        (1..=n, 1..=n, 0u32..5).prop_map(|(row, col, m)| Expr::Divided(
            Box::new(Expr::Gen {
                dd: false,
                row,
                col
            }),
            m
        )),
        (-3i64..=3).prop_map(|e| Expr::Pow(Box::new(Expr::V), e)),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Sub(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
            inner.clone().prop_map(|a| Expr::Neg(Box::new(a))),
            (inner, 0i64..4).prop_map(|(a, e)| Expr::Pow(Box::new(a), e)),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn printer_and_parser_round_trip(e in (1usize..=3).prop_flat_map(expr)) {
        let text = e.to_string();
        let parsed = parse_expression(&text, Some(3)).unwrap();
        prop_assert_eq!(&parsed, &e);
        prop_assert_eq!(parsed.to_string(), text);
    }
}
