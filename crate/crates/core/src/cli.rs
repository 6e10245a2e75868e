//! The `cubic` command-line frontend.
//!
//! Exit codes: 0 on success, 1 when a verification or classification fails,
//! 2 on malformed input or usage errors.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::Path;
use std::sync::Once;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::analysis::{
    cass_norm, classify_low_dim, compare, critical_lines_with_stability, extreme_set_from, fingerprint, mkc_from,
    CritOptions, DEFAULT_SEED, RANK4_MAX_DIM,
};
use crate::combinatorics::{
    frame_catalog, frame_catalog_names, frame_polynomial, triple_system_polynomial, ts_catalog, ts_catalog_names,
    validate_frame, validate_triple_system, Frame, TripleSystem,
};
use crate::constructors::{
    affine_extension, cartan_isoparametric, catalog, catalog_names, extend, parahurwitzification, pfaffian_form,
    simplicial, simplicial_recursive, tensor_product, triple,
};
use crate::tensor_core::{describe_failure, CubicForm, DEFAULT_TOL};
use crate::{Error, Result};

#[derive(Parser, Debug)]
#[command(name = "cubic", version, about = "Construct, verify and classify harmonic cubic forms")]
struct Cli {
    /// Emit machine-readable JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Verification tolerance.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Multistart budget for critical-line searches (default max(200n, 2000)).
    #[arg(long, global = true)]
    starts: Option<usize>,
    /// Seed for all randomized procedures.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a form: a catalog name, a family, or an operation on inputs.
    Construct(ConstructArgs),
    /// Check harmonicity and the Einstein condition.
    Verify {
        /// Form file, `-` for stdin, or a catalog name.
        input: String,
    },
    /// Critical lines, mkc, conformal associativity and fingerprint.
    Analyze(AnalyzeArgs),
    /// Try to separate two Einstein forms by invariants.
    Compare {
        /// First form: file, `-` or catalog name.
        a: String,
        /// Second form: file, `-` or catalog name.
        b: String,
    },
    /// Normal form of an Einstein form in dimension 2, 3 or 4.
    Classify {
        /// Form file, `-` for stdin, or a catalog name.
        input: String,
    },
    /// Steiner triple systems.
    Sts {
        action: Action,
        /// Catalog name, JSON file or `-`.
        input: String,
    },
    /// Tight frames.
    Frame {
        action: Action,
        /// Catalog name, JSON file or `-`.
        input: String,
    },
    /// List every named form with its dimension and kappa.
    CatalogList,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Action {
    Check,
    Poly,
}

#[derive(Args, Debug)]
struct ConstructArgs {
    /// Catalog name; family `simplicial`, `simplicial-recursive`, `cartan`,
    /// `pfaffian`; or operation `triple`, `parahurwitz`, `extend`, `affine`,
    /// `tensor`, `direct-sum`.
    what: String,
    /// Operands for operations: files, `-`, or catalog names.
    inputs: Vec<String>,
    /// Dimension for `simplicial`; m for `cartan`; n for `pfaffian`.
    #[arg(long)]
    dim: Option<usize>,
    /// Target kappa (rescales the result; for `extend`, the new kappa).
    #[arg(long)]
    kappa: Option<f64>,
    /// Output file, `-` for stdout.
    #[arg(short, long, default_value = "-")]
    output: String,
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    /// Form file, `-` for stdin, or a catalog name.
    input: String,
    /// Critical lines with start budget and stability flag.
    #[arg(long)]
    critlines: bool,
    /// The mkc invariant.
    #[arg(long)]
    mkc: bool,
    /// Norm of the conformal nonassociativity tensor over kappa.
    #[arg(long)]
    cass: bool,
    /// Orbit fingerprint (Einstein forms).
    #[arg(long)]
    fingerprint: bool,
}

enum Outcome {
    Ok,
    Failed,
}

struct Ctx {
    json: bool,
    tol: f64,
    opts: CritOptions,
}

static POOL: Once = Once::new();

fn configure_threads() {
    POOL.call_once(|| {
        if let Some(n) = std::env::var("CUBIC_THREADS").ok().and_then(|v| v.trim().parse::<usize>().ok()) {
            if n > 0 {
                // Fails only if a pool already exists, which is harmless.
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    });
}

/// Run the CLI on `argv` (including the program name), writing to the
/// process stdout and stderr. Returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    configure_threads();
    let ctx = Ctx { json: cli.json, tol: cli.tol, opts: CritOptions { starts: cli.starts, seed: cli.seed, ..CritOptions::default() } };
    match dispatch(&ctx, cli.command) {
        Ok(Outcome::Ok) => 0,
        Ok(Outcome::Failed) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NotEinstein(_) | Error::NotHarmonic(_) | Error::Classification(_) | Error::NotOrthogonal(_) => 1,
        _ => 2,
    }
}

fn dispatch(ctx: &Ctx, cmd: Command) -> Result<Outcome> {
    match cmd {
        Command::Construct(a) => construct(a),
        Command::Verify { input } => verify(ctx, &input),
        Command::Analyze(a) => analyze(ctx, a),
        Command::Compare { a, b } => {
            let verdict = compare(&load_form(&a)?, &load_form(&b)?, &ctx.opts)?;
            if ctx.json {
                print_json(&verdict);
            } else {
                println!("{verdict}");
            }
            Ok(Outcome::Ok)
        }
        Command::Classify { input } => {
            let c = classify_low_dim(&load_form(&input)?, &ctx.opts)?;
            if ctx.json {
                print_json(&c);
            } else {
                let mut line = c.label.to_string();
                if let (Some(m), Some(l)) = (c.mkc, c.lambda) {
                    let _ = write!(line, " mkc={} lambda={}", fmt_num(m), fmt_num(l));
                }
                println!("{line}");
            }
            Ok(Outcome::Ok)
        }
        Command::Sts { action, input } => sts(ctx, action, &input),
        Command::Frame { action, input } => frame(ctx, action, &input),
        Command::CatalogList => catalog_list(ctx),
    }
}

fn read_input(spec: &str) -> Result<String> {
    let mut s = String::new();
    if spec == "-" {
        std::io::stdin().read_to_string(&mut s)?;
    } else {
        s = std::fs::read_to_string(spec)?;
    }
    Ok(s)
}

/// A form from `-`, an existing file, or a catalog name.
fn load_form(spec: &str) -> Result<CubicForm> {
    if spec == "-" || Path::new(spec).exists() {
        return CubicForm::from_json(&read_input(spec)?);
    }
    match catalog(spec) {
        Ok(entry) => Ok(entry.form),
        Err(Error::UnknownName(_)) => Err(Error::UnknownName(format!("{spec} (not a file or catalog name)"))),
        Err(e) => Err(e),
    }
}

fn write_output(target: &str, text: &str) -> Result<()> {
    if target == "-" {
        let mut out = std::io::stdout().lock();
        writeln!(out, "{text}")?;
        out.flush()?;
    } else {
        std::fs::write(target, format!("{text}\n"))?;
    }
    Ok(())
}

fn print_json<T: Serialize>(v: &T) {
    println!("{}", serde_json::to_string(v).expect("report serializes"));
}

/// Integers print without a fractional part, other values with 12
/// significant digits.
fn fmt_num(x: f64) -> String {
    let r = x.round();
    if (x - r).abs() <= 1e-9 * x.abs().max(1.0) && r.abs() < 1e15 {
        format!("{}", r as i64)
    } else {
        let s = format!("{x:.12e}");
        let v: f64 = s.parse().unwrap_or(x);
        format!("{v}")
    }
}

fn operands(a: &ConstructArgs, count: usize) -> Result<Vec<CubicForm>> {
    if a.inputs.len() != count {
        return Err(Error::InvalidArgument(format!("`{}` takes {count} input(s), got {}", a.what, a.inputs.len())));
    }
    a.inputs.iter().map(|s| load_form(s)).collect()
}

fn no_operands(a: &ConstructArgs) -> Result<()> {
    if a.inputs.is_empty() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("`{}` takes no inputs", a.what)))
    }
}

fn need_dim(a: &ConstructArgs) -> Result<usize> {
    a.dim.ok_or_else(|| Error::InvalidArgument(format!("`{}` needs --dim", a.what)))
}

fn construct(a: ConstructArgs) -> Result<Outcome> {
    let mut kappa_applied = false;
    let form = match a.what.as_str() {
        "simplicial" => {
            no_operands(&a)?;
            simplicial(need_dim(&a)?)?
        }
        "simplicial-recursive" => {
            no_operands(&a)?;
            simplicial_recursive(need_dim(&a)?)?
        }
        "cartan" => {
            no_operands(&a)?;
            cartan_isoparametric(need_dim(&a)?)?
        }
        "pfaffian" => {
            no_operands(&a)?;
            pfaffian_form(need_dim(&a)?)?
        }
        "triple" => triple(&operands(&a, 1)?[0]),
        "parahurwitz" => parahurwitzification(&operands(&a, 1)?[0]),
        "affine" => affine_extension(&operands(&a, 1)?[0]),
        "extend" => {
            let q = operands(&a, 1)?.remove(0);
            let n = q.dim() + 1;
            kappa_applied = true;
            extend(&q, a.kappa.unwrap_or((n * (n - 1)) as f64))?
        }
        "tensor" => {
            let ops = operands(&a, 2)?;
            tensor_product(&ops[0], &ops[1])
        }
        "direct-sum" => {
            let ops = operands(&a, 2)?;
            ops[0].direct_sum(&ops[1])
        }
        name => {
            no_operands(&a)?;
            catalog(name)?.form
        }
    };
    let form = match a.kappa {
        Some(k) if !kappa_applied => form.normalize_kappa(k)?,
        _ => form,
    };
    write_output(&a.output, &form.to_json())?;
    Ok(Outcome::Ok)
}

fn verify(ctx: &Ctx, input: &str) -> Result<Outcome> {
    let p = load_form(input)?;
    let r = p.verify_einstein(ctx.tol);
    if ctx.json {
        print_json(&r);
    } else {
        println!("dim={} harmonic={} einstein={}", p.dim(), r.is_harmonic, r.is_einstein);
        println!("harmonic_defect={:.3e}", r.harmonic_defect);
        println!("kappa={} off_diag_defect={:.3e}", fmt_num(r.kappa), r.off_diag_defect);
        if !r.is_einstein {
            println!("failure: {}", describe_failure(&r));
        }
    }
    Ok(if r.is_einstein { Outcome::Ok } else { Outcome::Failed })
}

fn analyze(ctx: &Ctx, a: AnalyzeArgs) -> Result<Outcome> {
    let p = load_form(&a.input)?;
    let any = a.critlines || a.mkc || a.cass || a.fingerprint;
    let (want_lines, want_mkc, want_cass) = if any { (a.critlines, a.mkc, a.cass) } else { (true, true, true) };
    let mut report = serde_json::Map::new();
    let mut text = Vec::new();
    report.insert("dim".into(), json!(p.dim()));
    text.push(format!("dim={}", p.dim()));
    if want_lines || want_mkc {
        let lines = critical_lines_with_stability(&p, &ctx.opts);
        if want_lines {
            let extreme = extreme_set_from(&lines).len();
            report.insert("critical_lines".into(), serde_json::to_value(&lines).expect("serializes"));
            report.insert("extreme_count".into(), json!(extreme));
            text.push(format!(
                "critical_lines={} starts={} converged={} stable={} extreme_count={}",
                lines.lines.len(),
                lines.starts,
                lines.converged,
                lines.stable.map_or("unknown".to_string(), |s| s.to_string()),
                extreme
            ));
            for l in &lines.lines {
                text.push(format!(
                    "  value={} weight={} nondegenerate={}",
                    fmt_num(l.value),
                    fmt_num(l.weight),
                    l.nondegenerate
                ));
            }
        }
        if want_mkc {
            let m = mkc_from(&p, &lines)?;
            report.insert("mkc".into(), json!(m));
            text.push(format!("mkc={}", fmt_num(m)));
        }
    }
    if want_cass {
        if (3..=RANK4_MAX_DIM).contains(&p.dim()) {
            let c = cass_norm(&p)?;
            report.insert("cass_norm".into(), json!(c));
            text.push(format!("cass_norm={c:.6e}"));
        } else if a.cass {
            return Err(Error::InvalidArgument(format!("cass needs 3 <= dim <= {RANK4_MAX_DIM}")));
        }
    }
    if a.fingerprint {
        let f = fingerprint(&p, &ctx.opts)?;
        text.push(format!("fingerprint={}", serde_json::to_string(&f).expect("serializes")));
        report.insert("fingerprint".into(), serde_json::to_value(&f).expect("serializes"));
    }
    if ctx.json {
        println!("{}", Value::Object(report));
    } else {
        println!("{}", text.join("\n"));
    }
    Ok(Outcome::Ok)
}

fn load_ts(spec: &str) -> Result<TripleSystem> {
    if spec == "-" || Path::new(spec).exists() {
        return TripleSystem::from_json(&read_input(spec)?);
    }
    ts_catalog(spec)
}

fn load_frame(spec: &str) -> Result<Frame> {
    if spec == "-" || Path::new(spec).exists() {
        return Frame::from_json(&read_input(spec)?);
    }
    frame_catalog(spec)
}

fn sts(ctx: &Ctx, action: Action, input: &str) -> Result<Outcome> {
    let ts = load_ts(input)?;
    match action {
        Action::Check => {
            let r = validate_triple_system(&ts)?;
            if ctx.json {
                print_json(&r);
            } else {
                println!(
                    "points={} blocks={} partial={} regular={} r={} steiner={}",
                    ts.points,
                    ts.blocks.len(),
                    r.is_partial,
                    r.is_regular,
                    r.r,
                    r.is_steiner
                );
            }
            Ok(if r.is_partial && r.is_regular { Outcome::Ok } else { Outcome::Failed })
        }
        Action::Poly => {
            println!("{}", triple_system_polynomial(&ts)?.to_json());
            Ok(Outcome::Ok)
        }
    }
}

fn frame(ctx: &Ctx, action: Action, input: &str) -> Result<Outcome> {
    let f = load_frame(input)?;
    match action {
        Action::Check => {
            let r = validate_frame(&f, ctx.tol.max(1e-9))?;
            if ctx.json {
                print_json(&r);
            } else {
                let values: Vec<String> = r.distance_values.iter().map(|v| fmt_num(*v)).collect();
                println!(
                    "dim={} count={} spanning={} tight={} frame_constant={} centered={} unit_norm={} two_distance={} equiangular={} inner_products=[{}]",
                    f.dim,
                    r.count,
                    r.spanning,
                    r.tight,
                    fmt_num(r.frame_constant),
                    r.centered,
                    r.unit_norm,
                    r.two_distance,
                    r.equiangular,
                    values.join(", ")
                );
            }
            Ok(if r.spanning && r.tight { Outcome::Ok } else { Outcome::Failed })
        }
        Action::Poly => {
            println!("{}", frame_polynomial(&f)?.to_json());
            Ok(Outcome::Ok)
        }
    }
}

#[derive(Serialize)]
struct ListEntry {
    name: String,
    dim: usize,
    kappa: Option<f64>,
}

impl ListEntry {
    fn line(&self) -> String {
        let k = self.kappa.map_or("none".to_string(), fmt_num);
        format!("{} dim={} kappa={}", self.name, self.dim, k)
    }
}

/// Measured kappa of an Einstein form, `None` otherwise.
fn measured(p: &CubicForm) -> Option<f64> {
    let r = p.verify_einstein(DEFAULT_TOL);
    r.is_einstein.then_some(r.kappa)
}

fn catalog_list(ctx: &Ctx) -> Result<Outcome> {
    let mut entries = Vec::new();
    for name in catalog_names() {
        let e = catalog(name)?;
        let kappa = e.kappa_expected.or_else(|| measured(&e.form));
        entries.push(ListEntry { name: e.name.to_string(), dim: e.dim, kappa });
    }
    for n in 2..=8 {
        entries.push(ListEntry { name: format!("simplicial n={n}"), dim: n, kappa: Some((n * (n - 1)) as f64) });
    }
    for m in [1usize, 2, 4, 8] {
        let n = 3 * m + 2;
        entries.push(ListEntry { name: format!("cartan m={m}"), dim: n, kappa: Some(18.0 * (n + 2) as f64) });
    }
    let p = pfaffian_form(1)?;
    entries.push(ListEntry { name: "pfaffian n=1".into(), dim: p.dim(), kappa: measured(&p) });
    for name in ts_catalog_names() {
        let ts = ts_catalog(name)?;
        let r = validate_triple_system(&ts)?;
        entries.push(ListEntry { name: format!("sts {name}"), dim: ts.points, kappa: Some(2.0 * r.r as f64) });
    }
    for name in frame_catalog_names() {
        let name = name.replace("(n)", "(4)");
        let f = frame_catalog(&name)?;
        entries.push(ListEntry { name: format!("frame {name}"), dim: f.dim, kappa: measured(&frame_polynomial(&f)?) });
    }
    if ctx.json {
        print_json(&entries);
    } else {
        for e in &entries {
            println!("{}", e.line());
        }
    }
    Ok(Outcome::Ok)
}
