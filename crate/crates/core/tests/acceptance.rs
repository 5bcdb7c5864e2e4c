//! Acceptance criteria AC-1 .. AC-12. Prints one PASS/FAIL line per
//! criterion with its runtime and exits non-zero on an unexpected result.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value as Json;

use qgl::cli::{parse_expression, run_with_env, Expr};
use qgl::convolution::{circ_tables, dot_tables, Convolution, KElement, Product};
use qgl::flaggeo::MatrixType;
use qgl::qalgebra::{
    divided_pbw_monomial, DividedMonomial, GeneratorIndex, Kind, NCPoly, Strategy, Word,
    DEFAULT_STEP_LIMIT,
};
use qgl::scalar::{quantum_binomial, quantum_int, Scalar};
use qgl::verify::{antipode_compatibility, run_suite, Report, Suite, SuiteParams};

struct Outcome {
    pass: bool,
    /// A documented, analysed mismatch: reported as FAIL without failing the run.
    known: bool,
    detail: String,
}

impl Outcome {
    fn of(pass: bool, detail: impl Into<String>) -> Self {
        Self {
            pass,
            known: false,
            detail: detail.into(),
        }
    }
}

fn suite(s: Suite, n: usize, d: u32, q: u64) -> Report {
    let k = Convolution::new(q).expect("prime");
    run_suite(s, &k, &SuiteParams::new(n, d)).expect("suite runs")
}

fn all_pass(reports: &[Report]) -> (bool, usize, String) {
    let instances = reports.iter().map(|r| r.instances).sum();
    let bad: Vec<String> = reports
        .iter()
        .filter(|r| !r.passed())
        .map(|r| format!("{} n={} q={}: {:?}", r.suite, r.n, r.q, r.failures.first()))
        .collect();
    (bad.is_empty() && instances > 0, instances, bad.join("; "))
}

fn ac1() -> Outcome {
    tables(true)
}

fn ac2() -> Outcome {
    tables(false)
}

fn tables(circ: bool) -> Outcome {
    let cols = if circ { circ_tables() } else { dot_tables() };
    let mut checked = 0;
    for q in [2u64, 3, 5] {
        let k = Convolution::new(q).unwrap();
        for col in &cols {
            let seen = col.observe(k.geometry()).unwrap();
            if seen != col.expected(q) {
                return Outcome::of(false, format!("q={q} {col:?}: observed {seen:?}"));
            }
            checked += 1;
        }
    }
    Outcome::of(true, format!("{checked} table columns, q in {{2,3,5}}"))
}

fn ac3() -> Outcome {
    let mut reports = Vec::new();
    for q in [2u64, 3] {
        reports.push(suite(Suite::Pbw, 2, 3, q));
        reports.push(suite(Suite::NewPbw, 2, 3, q));
    }
    let (ok, inst, bad) = all_pass(&reports);
    Outcome::of(ok, format!("{inst} instances over Theta_<=3 {bad}"))
}

fn ac4() -> Outcome {
    let exhaustive = suite(Suite::Green, 2, 2, 2);
    let k = Convolution::new(2).unwrap();
    let sampled = run_suite(
        Suite::Green,
        &k,
        &SuiteParams {
            n: 2,
            d: 3,
            sample: Some(100),
            seed: 7,
        },
    )
    .unwrap();
    let ok = sampled.instances == 100;
    let (pass, inst, bad) = all_pass(&[exhaustive, sampled]);
    Outcome::of(
        pass && ok,
        format!("{inst} instances (d=2 exhaustive, 100 sampled at d=3) {bad}"),
    )
}

fn ac5() -> Outcome {
    let mut reports = Vec::new();
    for q in [2u64, 3] {
        for d in 0..=3 {
            reports.push(suite(Suite::MultH, 2, d, q));
        }
    }
    let (ok, inst, bad) = all_pass(&reports);
    Outcome::of(ok, format!("{inst} triples {bad}"))
}

fn integer_coefficients(x: &KElement) -> BTreeMap<MatrixType, i64> {
    x.terms()
        .map(|(m, c)| (m.clone(), c.as_integer().expect("integral coefficient")))
        .collect()
}

fn ac6() -> Outcome {
    let mut reports = Vec::new();
    let mut ok = true;
    for n in [2usize, 3] {
        let mut across_q = Vec::new();
        for q in [2u64, 3] {
            reports.push(suite(Suite::Determinant, n, 0, q));
            let k = Convolution::new(q).unwrap();
            let image = k
                .embed_symbolic(
                    &qgl::qalgebra::determinant(Kind::Frt, n),
                    qgl::convolution::Model::Psi,
                )
                .unwrap();
            across_q.push(integer_coefficients(&image));
        }
        ok &= across_q.windows(2).all(|w| w[0] == w[1]);
    }
    let (pass, inst, bad) = all_pass(&reports);
    Outcome::of(
        pass && ok,
        format!("{inst} checks, coefficients equal across q {bad}"),
    )
}

fn ac7() -> Outcome {
    let (axioms, inst, bad) = all_pass(&[suite(Suite::Hopf, 2, 0, 2)]);
    let compat = antipode_compatibility(2).unwrap();
    let display_holds = compat.iter().all(|(_, _, a, b)| a == b);
    // the pattern established by hand: equality exactly on the diagonal
    let pattern = compat.iter().all(|(i, j, a, b)| (a == b) == (i == j));
    let mismatches: Vec<String> = compat
        .iter()
        .filter(|(_, _, a, b)| a != b)
        .map(|(i, j, a, b)| {
            format!(
                "c{i}{j}: S Xi = {} detinv, Xi S = {} detinv",
                a.numerator_at(1),
                b.numerator_at(1)
            )
        })
        .collect();
    if display_holds {
        return Outcome::of(
            axioms,
            format!("antipode axioms ({inst}) and compatibility display hold"),
        );
    }
    Outcome {
        pass: false,
        known: axioms && pattern,
        detail: format!(
            "antipode axioms hold ({inst} checks{bad}); compatibility display holds only for i = j: {}",
            mismatches.join("; ")
        ),
    }
}

fn ac8() -> Outcome {
    let mut reports = Vec::new();
    for q in [2u64, 3] {
        reports.push(suite(Suite::TwistIso, 2, 2, q));
    }
    reports.push(suite(Suite::TwistIso, 3, 2, 2));
    let (ok, inst, bad) = all_pass(&reports);
    Outcome::of(
        ok,
        format!("{inst} checks (relations n=2,3; products of degree <= 2) {bad}"),
    )
}

fn ac9() -> Outcome {
    let mut reports = Vec::new();
    for q in [2u64, 3] {
        reports.push(suite(Suite::Coassoc, 2, 2, q));
        reports.push(suite(Suite::TildeHom, 2, 2, q));
    }
    let (ok, inst, bad) = all_pass(&reports);
    Outcome::of(ok, format!("{inst} checks {bad}"))
}

fn ac10() -> Outcome {
    let mut checks = 0;
    for q in [2u64, 3] {
        let k = Convolution::new(q).unwrap();
        for (i, j) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
            for m in 1..=3u32 {
                let lhs = k
                    .k_multiply(
                        &KElement::basis(MatrixType::unit(2, i, j), q),
                        &KElement::basis(MatrixType::cell(2, i, j, m), q),
                        Product::Circ,
                    )
                    .unwrap();
                let rhs = KElement::basis(MatrixType::cell(2, i, j, m + 1), q)
                    .scale_scalar(&quantum_int(m + 1))
                    .unwrap();
                if lhs != rhs {
                    return Outcome::of(false, format!("q={q} e{i}{j} m={m}: {lhs} vs {rhs}"));
                }
                checks += 1;
            }
        }
    }
    for kind in [Kind::Frt, Kind::Dd] {
        let div = |m: u32| divided_pbw_monomial(&MatrixType::cell(2, 1, 2, m), kind);
        for a in 0..=5u32 {
            for b in 0..=5 - a {
                let lhs = div(a).multiply(&div(b)).unwrap();
                let rhs: DividedMonomial = div(a + b).scale(&quantum_binomial(a + b, a).unwrap());
                if lhs != rhs {
                    return Outcome::of(false, format!("{kind:?} m={a} n={b}"));
                }
                checks += 1;
            }
        }
    }
    Outcome::of(true, format!("{checks} checks"))
}

fn ac11() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut max_steps = 0;
    for t in 0..1000 {
        let n = rng.gen_range(1..=3usize);
        let kind = if rng.gen_bool(0.5) {
            Kind::Frt
        } else {
            Kind::Dd
        };
        let len = rng.gen_range(0..=6usize);
        let w = Word(
            (0..len)
                .map(|_| GeneratorIndex::new(rng.gen_range(1..=n), rng.gen_range(1..=n)))
                .collect(),
        );
        let p = NCPoly::from_word(kind, n, w, Scalar::one());
        let a = p
            .normal_form_with(Strategy::Leftmost, DEFAULT_STEP_LIMIT)
            .unwrap();
        let b = p
            .normal_form_with(Strategy::Random(t), DEFAULT_STEP_LIMIT)
            .unwrap();
        if a.result != b.result {
            return Outcome::of(false, format!("word {t}: {} vs {}", a.result, b.result));
        }
        max_steps = max_steps.max(a.steps).max(b.steps);
    }
    Outcome::of(
        max_steps <= DEFAULT_STEP_LIMIT,
        format!("1000 words, max {max_steps} steps"),
    )
}

fn random_expr(rng: &mut ChaCha8Rng, n: usize, depth: u32) -> Expr {
    let gen = |rng: &mut ChaCha8Rng| Expr::Gen {
        dd: rng.gen_bool(0.3),
        row: rng.gen_range(1..=n),
        col: rng.gen_range(1..=n),
    };
    if depth == 0 || rng.gen_bool(0.3) {
        return match rng.gen_range(0..6) {
            0 => Expr::Int(rng.gen_range(0..50u32).into()),
            1 => Expr::Pow(Box::new(Expr::V), rng.gen_range(-3..=3)),
            2 => Expr::Det,
            3 => Expr::DetInv,
            4 => Expr::Divided(Box::new(gen(rng)), rng.gen_range(0..4)),
            _ => gen(rng),
        };
    }
    let choice = rng.gen_range(0..5);
    let a = Box::new(random_expr(rng, n, depth - 1));
    match choice {
        0 => Expr::Add(a, Box::new(random_expr(rng, n, depth - 1))),
        1 => Expr::Sub(a, Box::new(random_expr(rng, n, depth - 1))),
        2 => Expr::Mul(a, Box::new(random_expr(rng, n, depth - 1))),
        3 => Expr::Neg(a),
        _ => Expr::Pow(a, rng.gen_range(0..4)),
    }
}

fn cli(args: &[String], cache: &std::path::Path) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["qgl".to_string()];
    argv.extend_from_slice(args);
    let code = run_with_env(argv, Some(cache.to_path_buf()), &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn ac12() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for t in 0..500 {
        let n = rng.gen_range(1..=3);
        let e = random_expr(&mut rng, n, 4);
        let text = e.to_string();
        match parse_expression(&text, Some(n)) {
            Ok(back) if back == e && back.to_string() == text => {}
            other => return Outcome::of(false, format!("round trip {t}: {text:?} -> {other:?}")),
        }
    }

    let dir = tempfile::tempdir().unwrap();
    let runs = |stats: &mut Vec<u64>| -> Result<String, String> {
        let mut all = String::new();
        for q in ["2", "3"] {
            for d in ["1", "2", "3"] {
                for s in Suite::ALL {
                    let args: Vec<String> = [
                        "verify",
                        s.name(),
                        "--n",
                        "2",
                        "--d",
                        d,
                        "--q",
                        q,
                        "--stats",
                    ]
                    .iter()
                    .map(|x| x.to_string())
                    .collect();
                    let (code, out, err) = cli(&args, dir.path());
                    if code != 0 {
                        return Err(format!("{args:?} exited {code}: {err}"));
                    }
                    let st: Json = serde_json::from_str(err.trim()).map_err(|e| e.to_string())?;
                    stats.push(st["enumerations"].as_u64().unwrap_or(0));
                    all.push_str(&out);
                }
            }
        }
        Ok(all)
    };
    let (mut cold_stats, mut warm_stats) = (Vec::new(), Vec::new());
    let cold = match runs(&mut cold_stats) {
        Ok(x) => x,
        Err(e) => return Outcome::of(false, e),
    };
    let warm = match runs(&mut warm_stats) {
        Ok(x) => x,
        Err(e) => return Outcome::of(false, e),
    };
    let (cold_n, warm_n): (u64, u64) = (cold_stats.iter().sum(), warm_stats.iter().sum());
    if cold != warm || warm_n >= cold_n {
        return Outcome::of(
            false,
            format!("cold/warm differ or no saving ({cold_n} vs {warm_n} enumerations)"),
        );
    }

    // exit codes: usage errors, verification failure through a poisoned cache
    let args = |xs: &[&str]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    for bad in [
        args(&["nf", "E[1,3]", "--n", "2"]),
        args(&["nf", "(E[1,1]"]),
        args(&["verify", "nonsense"]),
        args(&["orbits", "--d", "2", "--q", "4"]),
        args(&["frobnicate"]),
    ] {
        let (code, _, err) = cli(&bad, dir.path());
        if code != 2 || serde_json::from_str::<Json>(err.trim()).is_err() {
            return Outcome::of(false, format!("{bad:?} gave exit {code}"));
        }
    }
    let poisoned = tempfile::tempdir().unwrap();
    std::fs::write(
        poisoned.path().join(qgl::cache::CACHE_FILE),
        "{\"kind\":\"h\",\"q\":2,\"n\":2,\"matrices\":[[[1,1],[0,0]],[[1,0],[0,0]],[[0,1],[0,0]]],\"value\":5}\n",
    )
    .unwrap();
    let (code, out, _) = cli(
        &args(&["verify", "relations-dot", "--n", "2", "--q", "2"]),
        poisoned.path(),
    );
    let failed: Json = serde_json::from_str(out.trim()).unwrap_or(Json::Null);
    if code != 1 || failed["failures"].as_array().is_none_or(|f| f.is_empty()) {
        return Outcome::of(false, format!("poisoned cache gave exit {code}"));
    }
    Outcome::of(
        true,
        format!(
            "500 round trips; {} suite runs byte-identical, enumerations {cold_n} cold / {warm_n} warm; exit codes 0/1/2",
            cold_stats.len()
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome, Duration); 12] = [
        (
            "AC-1 relation tables, circ model",
            ac1,
            Duration::from_secs(1),
        ),
        (
            "AC-2 relation tables, dot model",
            ac2,
            Duration::from_secs(1),
        ),
        ("AC-3 PBW bases", ac3, Duration::from_secs(60)),
        ("AC-4 Green's formula", ac4, Duration::from_secs(300)),
        ("AC-5 g/h comparison", ac5, Duration::from_secs(300)),
        ("AC-6 determinant identity", ac6, Duration::from_secs(60)),
        ("AC-7 antipode", ac7, Duration::from_secs(10)),
        ("AC-8 twist isomorphisms", ac8, Duration::from_secs(60)),
        ("AC-9 coalgebra", ac9, Duration::from_secs(60)),
        ("AC-10 divided powers", ac10, Duration::from_secs(10)),
        ("AC-11 rewriting confluence", ac11, Duration::from_secs(60)),
        ("AC-12 CLI", ac12, Duration::from_secs(60)),
    ];
    let mut unexpected = 0;
    for (name, check, bound) in criteria {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let in_time = elapsed <= bound;
        let pass = outcome.pass && in_time;
        let status = if pass { "PASS" } else { "FAIL" };
        let note = if !in_time {
            format!(" [over the {bound:?} bound]")
        } else if outcome.known {
            " [known, see README]".to_string()
        } else {
            String::new()
        };
        println!("{status} {name} ({elapsed:.2?}): {}{note}", outcome.detail);
        if !pass && !(outcome.known && in_time) {
            unexpected += 1;
        }
    }
    if unexpected > 0 {
        println!("{unexpected} criteria failed unexpectedly");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
