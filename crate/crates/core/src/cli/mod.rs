//! The `qgl` command line: argument handling, configuration, dispatch and
//! JSON/CSV output. Exit codes: 0 success, 1 verification failure, 2 usage
//! or input error.

mod expr;

pub use expr::{evaluate_expression, parse_expression, Expr, Value};

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value as Json};

use crate::cache::ConstantCache;
use crate::convolution::{
    circ_tables, dot_tables, Convolution, Coproduct, KElement, Model, Product,
};
use crate::error::{Error, Result};
use crate::flaggeo::{FlagGeometry, Guards, MatrixType};
use crate::qalgebra::{
    antipode_generator, determinant, transported_dd_antipode, DividedMonomial, Kind,
    LocalizedElement, Tensor,
};
use crate::scalar::{is_prime, Scalar};
use crate::verify::{run_suite, Suite, SuiteParams};

pub const CACHE_ENV: &str = "QGL_CACHE_DIR";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum MulKind {
    Circ,
    Dot,
    Bullet,
    Symbolic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DeltaKind {
    Plain,
    Tilde,
    Prime,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ScKind {
    C,
    H,
    G,
    A,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GuardConfig {
    pub max_d: u32,
    pub max_q: u64,
}

/// Defaults for every command, read from `--config FILE`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub n: usize,
    pub q: Vec<u64>,
    pub model: Kind,
    pub product: MulKind,
    pub guards: GuardConfig,
    pub cache_dir: Option<PathBuf>,
}

impl Default for Config {
    fn default() -> Self {
        let g = Guards::default();
        Self {
            n: 2,
            q: vec![2],
            model: Kind::Frt,
            product: MulKind::Dot,
            guards: GuardConfig {
                max_d: g.max_d,
                max_q: g.max_q,
            },
            cache_dir: None,
        }
    }
}

impl Config {
    pub fn load(path: &Path) -> Result<Config> {
        let bad = |m: String| Error::Config(format!("{}: {m}", path.display()));
        let text = std::fs::read_to_string(path).map_err(|e| bad(e.to_string()))?;
        let cfg: Config = serde_json::from_str(&text).map_err(|e| bad(e.to_string()))?;
        cfg.validate().map_err(|e| bad(e.to_string()))?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Domain("n must be positive".into()));
        }
        if self.q.is_empty() {
            return Err(Error::Domain("q list is empty".into()));
        }
        if let Some(q) = self.q.iter().find(|q| !is_prime(**q)) {
            return Err(Error::Domain(format!("q = {q} is not prime")));
        }
        if self.guards.max_d == 0 || self.guards.max_q == 0 {
            return Err(Error::Domain("guards must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "qgl",
    version,
    about = "Quantum GL(n) coordinate algebras and their flag-variety models"
)]
struct Cli {
    /// JSON configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory of the persistent structure-constant cache.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Print enumeration statistics to stderr.
    #[arg(long, global = true)]
    stats: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Normal form of an expression.
    Nf {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        dd: bool,
    },
    /// Product of two expressions, symbolically or in the convolution algebra.
    Mul {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
        #[arg(long, value_enum)]
        kind: Option<MulKind>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        q: Option<u64>,
        #[arg(long)]
        dd: bool,
    },
    /// Coproduct; symbolic unless `--q` is given.
    Delta {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long, value_enum, default_value = "plain")]
        kind: DeltaKind,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        q: Option<u64>,
        #[arg(long)]
        dd: bool,
    },
    /// The quantum determinant, and its image in `K` when `--q` is given.
    Det {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        dd: bool,
        #[arg(long)]
        q: Option<u64>,
    },
    /// `S(E_ij)`, or the transported Dipper-Donkin antipode with `--dd`.
    Antipode {
        #[arg(long)]
        i: usize,
        #[arg(long)]
        j: usize,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        dd: bool,
    },
    /// Orbit types of degree `d` with their sizes.
    Orbits {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        q: Option<u64>,
    },
    /// One structure constant; matrices as a JSON list.
    Sc {
        #[arg(long, value_enum)]
        kind: ScKind,
        #[arg(long)]
        q: Option<u64>,
        matrices: String,
    },
    /// Run a verification suite.
    Verify {
        suite: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 2)]
        d: u32,
        #[arg(long)]
        q: Option<u64>,
        /// Check only this many random instances (green).
        #[arg(long)]
        sample: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Structure-constant tables as CSV: `circ`, `dot`, `c`, `h`, `g` or `a`.
    Tables {
        #[arg(long)]
        suite: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 1)]
        d: u32,
        #[arg(long)]
        q: Option<u64>,
    },
}

/// Run with the process environment.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let env_cache = std::env::var_os(CACHE_ENV).map(PathBuf::from);
    run_with_env(args, env_cache, out, err)
}

/// `env_cache` stands in for `QGL_CACHE_DIR`.
pub fn run_with_env<I, T>(
    args: I,
    env_cache: Option<PathBuf>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{}", e.render());
                return 0;
            }
            let body = json!({"error": "usage", "message": e.render().to_string().trim_end()});
            let _ = writeln!(err, "{body}");
            return 2;
        }
    };
    let mut ctx = match Context::new(&cli, env_cache) {
        Ok(ctx) => ctx,
        Err(e) => return report_error(err, &e),
    };
    match dispatch(&cli.command, &mut ctx, out) {
        Ok(code) => {
            if cli.stats {
                let _ = writeln!(err, "{}", ctx.stats());
            }
            code
        }
        Err(e) => report_error(err, &e),
    }
}

fn report_error(err: &mut dyn Write, e: &Error) -> i32 {
    let category = match e {
        Error::Domain(_) => "domain",
        Error::IndexOutOfRange { .. } => "index",
        Error::Mismatch(_) => "mismatch",
        Error::Unsupported(_) => "unsupported",
        Error::SizeGuard(_) => "size-guard",
        Error::Syntax { .. } => "syntax",
        Error::NonHomogeneous(_) => "non-homogeneous",
        Error::CorruptCache { .. } => "corrupt-cache",
        Error::Config(_) => "config",
        Error::Fixture(_) => "fixture",
        Error::Io(_) => "io",
        Error::Json(_) => "json",
    };
    let mut body = json!({"error": category, "message": e.to_string()});
    match e {
        Error::Syntax { offset, .. } => body["offset"] = json!(offset),
        Error::CorruptCache { line, .. } => body["line"] = json!(line),
        _ => {}
    }
    let _ = writeln!(err, "{body}");
    2
}

struct Context {
    config: Config,
    cache: Arc<ConstantCache>,
    algebras: Vec<Convolution>,
}

impl Context {
    fn new(cli: &Cli, env_cache: Option<PathBuf>) -> Result<Context> {
        let config = match &cli.config {
            Some(path) => Config::load(path)?,
            None => Config::default(),
        };
        let dir = cli
            .cache_dir
            .clone()
            .or(env_cache)
            .or_else(|| config.cache_dir.clone());
        let cache = match dir {
            Some(dir) => {
                std::fs::create_dir_all(&dir)?;
                ConstantCache::open(&dir)?
            }
            None => ConstantCache::in_memory(),
        };
        Ok(Context {
            config,
            cache: Arc::new(cache),
            algebras: Vec::new(),
        })
    }

    fn n(&self, n: Option<usize>) -> Result<usize> {
        let n = n.unwrap_or(self.config.n);
        if n == 0 {
            return Err(Error::Domain("n must be positive".into()));
        }
        Ok(n)
    }

    fn kind(&self, dd: bool) -> Kind {
        if dd {
            Kind::Dd
        } else {
            self.config.model
        }
    }

    fn qs(&self, q: Option<u64>) -> Vec<u64> {
        match q {
            Some(q) => vec![q],
            None => self.config.q.clone(),
        }
    }

    fn q(&self, q: Option<u64>) -> u64 {
        q.unwrap_or(self.config.q[0])
    }

    fn algebra(&mut self, q: u64) -> Result<&Convolution> {
        if let Some(i) = self.algebras.iter().position(|k| k.q() == q) {
            return Ok(&self.algebras[i]);
        }
        let guards = Guards {
            max_d: self.config.guards.max_d,
            max_q: self.config.guards.max_q,
        };
        let geo = FlagGeometry::with_options(q, guards, self.cache.clone())?;
        self.algebras.push(Convolution::from_geometry(geo));
        Ok(self.algebras.last().expect("just pushed"))
    }

    fn stats(&self) -> Json {
        let enumerations: u64 = self
            .algebras
            .iter()
            .map(|k| k.geometry().enumerations())
            .sum();
        json!({"enumerations": enumerations, "cache_entries": self.cache.len()})
    }
}

fn emit(out: &mut dyn Write, value: &Json) -> Result<()> {
    writeln!(out, "{value}")?;
    Ok(())
}

/// Parse and evaluate in the presentation selected by `dd` or the atoms used.
fn evaluate(
    text: &str,
    n: Option<usize>,
    kind: Kind,
    ctx: &Context,
) -> Result<(Value, Kind, usize)> {
    let e = parse_expression(text, None)?;
    let n = match n {
        Some(n) => ctx.n(Some(n))?,
        None => ctx.config.n.max(e.max_index()),
    };
    if e.uses_dd_atoms() && e.uses_frt_atoms() {
        return Err(Error::Mismatch(
            "expression mixes E[i,j] and c[i,j] atoms".into(),
        ));
    }
    let kind = if e.uses_dd_atoms() { Kind::Dd } else { kind };
    Ok((evaluate_expression(&e, kind, n)?, kind, n))
}

fn value_json(x: &Value, kind: Kind, n: usize) -> Json {
    let mut text = x.numerator.to_string();
    if !x.denominator.is_one() {
        text = format!("({text}) / ({})", x.denominator);
    }
    if x.det_power > 0 {
        text = format!("({text}) * detinv^{}", x.det_power);
    }
    json!({
        "kind": kind,
        "n": n,
        "terms": x.numerator,
        "denominator": x.denominator,
        "det_power": x.det_power,
        "text": text,
    })
}

fn localized_json(x: &LocalizedElement) -> Json {
    let parts: Vec<Json> = x
        .parts()
        .map(|(k, p)| json!({"det_power": k, "terms": p, "text": p.to_string()}))
        .collect();
    json!({"kind": x.kind(), "n": x.n(), "parts": parts})
}

fn tensor_json(t: &Tensor, denominator: &Scalar) -> Json {
    let terms: Vec<Json> = t
        .terms()
        .map(|((a, b), c)| json!({"left": a, "right": b, "coeff": c}))
        .collect();
    json!({"terms": terms, "denominator": denominator})
}

fn embed(k: &Convolution, x: &Value, model: Model) -> Result<KElement> {
    if x.det_power > 0 {
        return Err(Error::Unsupported(
            "det^-1 has no image in the convolution algebra".into(),
        ));
    }
    k.embed_divided(
        &DividedMonomial {
            numerator: x.numerator.clone(),
            denominator: x.denominator.clone(),
        },
        model,
    )
}

fn dispatch(cmd: &Command, ctx: &mut Context, out: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Nf { expr, n, dd } => {
            let (x, kind, n) = evaluate(expr, *n, ctx.kind(*dd), ctx)?;
            emit(out, &value_json(&x, kind, n))?;
        }
        Command::Mul {
            a,
            b,
            kind,
            n,
            q,
            dd,
        } => {
            let mul = kind.unwrap_or(ctx.config.product);
            let default_kind = if mul == MulKind::Bullet {
                Kind::Dd
            } else {
                ctx.kind(*dd)
            };
            let (x, kx, nx) = evaluate(a, *n, default_kind, ctx)?;
            let (y, ky, ny) = evaluate(b, Some(*n).flatten().or(Some(nx)), kx, ctx)?;
            if kx != ky || nx != ny {
                return Err(Error::Mismatch("factors live in different algebras".into()));
            }
            let (product, model) = match mul {
                MulKind::Symbolic => {
                    let p = Expr::Mul(
                        Box::new(parse_expression(a, None)?),
                        Box::new(parse_expression(b, None)?),
                    );
                    let v = evaluate_expression(&p, kx, nx)?;
                    emit(out, &value_json(&v, kx, nx))?;
                    return Ok(0);
                }
                MulKind::Circ => (Product::Circ, Model::Phi),
                MulKind::Dot => (Product::Dot, Model::Psi),
                MulKind::Bullet => (Product::Bullet, Model::PsiPrime),
            };
            if kx != model.source_kind() {
                return Err(Error::Mismatch(format!(
                    "--kind {mul:?} takes {:?} expressions",
                    model.source_kind()
                )));
            }
            let q = ctx.q(*q);
            let k = ctx.algebra(q)?;
            let r = k.k_multiply(&embed(k, &x, model)?, &embed(k, &y, model)?, product)?;
            emit(
                out,
                &json!({"q": q, "product": mul, "result": r, "text": r.to_string()}),
            )?;
        }
        Command::Delta {
            expr,
            kind,
            n,
            q,
            dd,
        } => {
            let (x, kx, nx) = evaluate(expr, *n, ctx.kind(*dd), ctx)?;
            match q {
                None => {
                    if *kind != DeltaKind::Plain {
                        return Err(Error::Domain("tilde and prime coproducts need --q".into()));
                    }
                    if x.det_power > 0 {
                        return Err(Error::Unsupported("coproduct of det^-1 terms".into()));
                    }
                    emit(out, &tensor_json(&x.numerator.comultiply(), &x.denominator))?;
                }
                Some(q) => {
                    let (co, model) = match (kind, kx) {
                        (DeltaKind::Plain, Kind::Frt) => (Coproduct::Plain, Model::Psi),
                        (DeltaKind::Plain, Kind::Dd) => (Coproduct::Plain, Model::PsiPrime),
                        (DeltaKind::Tilde, Kind::Frt) => (Coproduct::Tilde, Model::Phi),
                        (DeltaKind::Prime, Kind::Frt) => (Coproduct::Prime, Model::Phi),
                        _ => {
                            return Err(Error::Mismatch(
                                "tilde and prime coproducts act on the FRT model".into(),
                            ))
                        }
                    };
                    let k = ctx.algebra(*q)?;
                    let t = k.k_comultiply(&embed(k, &x, model)?, co)?;
                    emit(out, &json!({"q": q, "n": nx, "result": t}))?;
                }
            }
        }
        Command::Det { n, dd, q } => {
            let n = ctx.n(*n)?;
            let kind = ctx.kind(*dd);
            let det = determinant(kind, n);
            let mut body = json!({"kind": kind, "n": n, "terms": det, "text": det.to_string()});
            if let Some(q) = q {
                let model = if kind == Kind::Dd {
                    Model::PsiPrime
                } else {
                    Model::Psi
                };
                let k = ctx.algebra(*q)?;
                let image = k.embed_symbolic(&det, model)?;
                body["q"] = json!(q);
                body["image"] = json!(image);
                body["image_text"] = json!(image.to_string());
            }
            emit(out, &body)?;
        }
        Command::Antipode { i, j, n, dd } => {
            let n = ctx.n(*n)?.max(*i).max(*j);
            let x = if ctx.kind(*dd) == Kind::Dd {
                transported_dd_antipode(n, *i, *j)?
            } else {
                antipode_generator(Kind::Frt, n, *i, *j)?
            };
            let mut body = localized_json(&x);
            body["transported"] = json!(ctx.kind(*dd) == Kind::Dd);
            emit(out, &body)?;
        }
        Command::Orbits { n, d, q } => {
            let n = ctx.n(*n)?;
            let q = ctx.q(*q);
            let geo = ctx.algebra(q)?.geometry();
            let mut list = Vec::new();
            for m in MatrixType::theta(n, *d) {
                list.push(json!({
                    "M": m,
                    "ro": m.ro(),
                    "co": m.co(),
                    "orbit_size": geo.orbit_size(&m)?.to_string(),
                    "stabilizer": geo.stabilizer_order(&m)?.to_string(),
                    "dim": m.orbit_dim(),
                }));
            }
            emit(out, &json!({"n": n, "d": d, "q": q, "orbits": list}))?;
        }
        Command::Sc { kind, q, matrices } => {
            let q = ctx.q(*q);
            let raw: Json = serde_json::from_str(matrices)?;
            let ms: Vec<MatrixType> = match serde_json::from_value::<MatrixType>(raw.clone()) {
                Ok(m) => vec![m],
                Err(_) => serde_json::from_value(raw)?,
            };
            let need = if *kind == ScKind::A { 1 } else { 3 };
            if ms.len() != need {
                return Err(Error::Domain(format!(
                    "expected {need} matrices, got {}",
                    ms.len()
                )));
            }
            let geo = ctx.algebra(q)?.geometry();
            let value = match kind {
                ScKind::C => geo.structure_c(&ms[0], &ms[1], &ms[2])?,
                ScKind::H => geo.structure_h(&ms[0], &ms[1], &ms[2])?,
                ScKind::G => geo.structure_g(&ms[0], &ms[1], &ms[2])?,
                ScKind::A => geo.stabilizer_order(&ms[0])?,
            };
            let value = u64::try_from(value)
                .map(Json::from)
                .unwrap_or_else(|_| json!(value.to_string()));
            emit(
                out,
                &json!({"kind": format!("{kind:?}").to_lowercase(), "q": q, "matrices": ms, "value": value}),
            )?;
        }
        Command::Verify {
            suite,
            n,
            d,
            q,
            sample,
            seed,
        } => {
            let suite: Suite = suite.parse()?;
            let params = SuiteParams {
                n: ctx.n(*n)?,
                d: *d,
                sample: *sample,
                seed: *seed,
            };
            let mut reports = Vec::new();
            for q in ctx.qs(*q) {
                reports.push(run_suite(suite, ctx.algebra(q)?, &params)?);
            }
            let ok = reports.iter().all(|r| r.passed());
            let body = if reports.len() == 1 {
                serde_json::to_value(&reports[0])?
            } else {
                serde_json::to_value(&reports)?
            };
            emit(out, &body)?;
            return Ok(if ok { 0 } else { 1 });
        }
        Command::Tables { suite, n, d, q } => {
            let n = ctx.n(*n)?;
            let q = ctx.q(*q);
            let rows = table_rows(suite, n, *d, ctx.algebra(q)?)?;
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["L", "M", "N", "value"])
                .map_err(csv_error)?;
            for row in rows {
                w.write_record(&row).map_err(csv_error)?;
            }
            out.write_all(&w.into_inner().map_err(|e| Error::Io(e.into_error()))?)?;
        }
    }
    Ok(0)
}

fn csv_error(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

fn table_rows(suite: &str, n: usize, d: u32, k: &Convolution) -> Result<Vec<[String; 4]>> {
    let geo = k.geometry();
    let s = |m: &MatrixType| m.to_string();
    let mut rows = Vec::new();
    match suite {
        "circ" | "dot" => {
            let cols = if suite == "circ" {
                circ_tables()
            } else {
                dot_tables()
            };
            for col in cols {
                let obs = col.observe(geo)?;
                for (m, v) in obs.values {
                    rows.push([s(&m), s(&col.left), s(&col.right), v.to_string()]);
                }
            }
        }
        "c" => {
            for l in MatrixType::theta(n, d) {
                for (m, nn, c) in geo.coproduct_terms(&l)? {
                    rows.push([s(&l), s(&m), s(&nn), c.to_string()]);
                }
            }
        }
        "h" | "g" => {
            for d2 in 0..=d {
                for m2 in MatrixType::theta(n, d2) {
                    for m1 in MatrixType::theta(n, d - d2) {
                        let terms = if suite == "h" {
                            geo.h_terms(&m2, &m1)?
                        } else {
                            geo.g_terms(&m2, &m1)?
                        };
                        for (m, c) in terms {
                            rows.push([s(&m), s(&m2), s(&m1), c.to_string()]);
                        }
                    }
                }
            }
        }
        "a" => {
            for l in MatrixType::theta(n, d) {
                rows.push([
                    s(&l),
                    String::new(),
                    String::new(),
                    geo.stabilizer_order(&l)?.to_string(),
                ]);
            }
        }
        other => {
            return Err(Error::Domain(format!(
                "unknown table suite {other:?} (circ, dot, c, h, g, a)"
            )))
        }
    }
    Ok(rows)
}
