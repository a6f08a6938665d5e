//! Command-line front end for the `k3lattice` library.
//!
//! [`run`] never exits the process; it returns the exit code together with
//! the JSON payload and a plain-text rendering.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use k3lattice::exactmath::{Int, Signature};
use k3lattice::expr::{self, LatticeExpr};
use k3lattice::families::{
    self, admits_symplectic_involution, admits_symplectic_order3,
    involution_invariants_to_fixed_locus, FixedLocusP3, InvolutionInvariants, Registry,
};
use k3lattice::glue;
use k3lattice::lattice::{int_to_json, LatticeInvariants};
use k3lattice::lattice::catalog::LatticeData;
use k3lattice::lefschetz::{
    self, build_system, check_printed_system, rat_string, Bounds, Convention, CurveTerm,
    FixedLocusHypothesis, PrintedSystem, PrintedSystemKind,
};

pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;

#[derive(Debug, Clone, PartialEq)]
pub struct CliResult {
    pub code: i32,
    /// `None` for usage errors and help output.
    pub json: Option<Value>,
    pub text: String,
}

impl CliResult {
    fn ok(json: Value, text: String) -> Self {
        CliResult { code: EXIT_OK, json: Some(json), text }
    }

    fn usage(text: String) -> Self {
        CliResult { code: EXIT_USAGE, json: None, text }
    }

    fn domain(kind: &str, err: impl std::fmt::Display) -> Self {
        let message = err.to_string();
        CliResult {
            code: EXIT_DOMAIN,
            json: Some(json!({ "error": { "kind": kind, "message": message } })),
            text: format!("error: {message}"),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "k3lat", version, about = "Lattice and fixed-point computations for K3 automorphisms")]
struct Cli {
    /// Print the canonical JSON serialization.
    #[arg(long, global = true)]
    json: bool,
    /// Family registry file.
    #[arg(long, global = true, env = "K3LAT_REGISTRY")]
    registry: Option<PathBuf>,
    /// Directory holding m14.json and m22.json.
    #[arg(long, global = true, env = "K3LAT_FIXTURES")]
    fixtures: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Rank, signature, discriminant group and p-elementary data.
    Info { expr: String },
    /// Primitive-embedding tests for S into W.
    Embed { s: String, w: String },
    /// Even overlattices of the given index.
    Overlattices {
        expr: String,
        #[arg(long)]
        index: usize,
    },
    /// Non-symplectic involutions.
    Involution {
        #[command(subcommand)]
        cmd: ClassifyInvolution,
    },
    /// Non-symplectic automorphisms of order 3.
    Order3 {
        #[command(subcommand)]
        cmd: ClassifyOrder3,
    },
    /// Lefschetz fixed-point systems.
    Lefschetz(LefschetzArgs),
    /// Tables.
    Table {
        #[command(subcommand)]
        cmd: TableCmd,
    },
    /// Registry lookup.
    Family {
        #[arg(long)]
        order: u64,
        #[arg(long)]
        fixed: String,
    },
}

#[derive(Subcommand, Debug)]
enum ClassifyInvolution {
    Classify { r: usize, a: usize, delta: u8 },
}

#[derive(Subcommand, Debug)]
enum ClassifyOrder3 {
    Classify { n: usize, k: usize },
}

#[derive(Subcommand, Debug)]
enum TableCmd {
    /// Ranks and moduli of K3 surfaces with both kinds of automorphism.
    Rank {
        #[arg(long)]
        m: Option<u64>,
    },
}

#[derive(Args, Debug)]
#[command(args_conflicts_with_subcommands = true)]
struct LefschetzArgs {
    #[command(subcommand)]
    fixture: Option<FixtureCmd>,
    #[arg(long)]
    order: Option<u64>,
    /// Isolated types kept as unknowns, e.g. 1,2,4,5.
    #[arg(long, value_delimiter = ',')]
    types: Vec<usize>,
    #[arg(long, allow_negative_numbers = true, conflicts_with = "h_range")]
    h: Option<i64>,
    #[arg(long, value_name = "LO,HI", allow_hyphen_values = true)]
    h_range: Option<String>,
    /// Upper bound on each point count.
    #[arg(long, default_value_t = 24)]
    bound: i64,
    #[arg(long, default_value = "matrix")]
    convention: String,
}

#[derive(Subcommand, Debug)]
enum FixtureCmd {
    /// Solve one of the stored printed systems.
    Fixture { name: String },
}

/// Runs one command. `argv[0]` is the program name.
pub fn run<I, T>(argv: I) -> CliResult
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => CliResult {
                    code: EXIT_OK,
                    json: None,
                    text,
                },
                _ => CliResult::usage(text),
            };
        }
    };
    dispatch(&cli)
}

/// What goes to stdout for this result.
pub fn render(result: &CliResult, as_json: bool) -> String {
    match (&result.json, as_json) {
        (Some(v), true) => serde_json::to_string(v).expect("JSON values serialize") + "\n",
        _ => {
            let mut s = result.text.clone();
            if !s.ends_with('\n') {
                s.push('\n');
            }
            s
        }
    }
}

/// True when `--json` appears before a `--` separator.
pub fn wants_json(args: &[String]) -> bool {
    args.iter().take_while(|a| *a != "--").any(|a| a == "--json")
}

fn dispatch(cli: &Cli) -> CliResult {
    match &cli.command {
        Command::Info { expr } => info(expr),
        Command::Embed { s, w } => embed(s, w),
        Command::Overlattices { expr, index } => overlattices(expr, *index),
        Command::Involution { cmd: ClassifyInvolution::Classify { r, a, delta } } => {
            involution(*r, *a, *delta)
        }
        Command::Order3 { cmd: ClassifyOrder3::Classify { n, k } } => order3(*n, *k),
        Command::Lefschetz(args) => match &args.fixture {
            Some(FixtureCmd::Fixture { name }) => fixture(name, cli.fixtures.as_ref()),
            None => lefschetz_system(args),
        },
        Command::Table { cmd: TableCmd::Rank { m } } => match registry(cli) {
            Ok(reg) => table_rank(&reg, *m),
            Err(e) => e,
        },
        Command::Family { order, fixed } => match registry(cli) {
            Ok(reg) => family(&reg, *order, fixed),
            Err(e) => e,
        },
    }
}

fn registry(cli: &Cli) -> Result<std::borrow::Cow<'static, Registry>, CliResult> {
    match &cli.registry {
        None => Ok(std::borrow::Cow::Borrowed(Registry::builtin())),
        Some(path) => Registry::load(path)
            .map(std::borrow::Cow::Owned)
            .map_err(|e| CliResult::domain("registry", e)),
    }
}

fn signature_json(s: Signature) -> Value {
    json!({ "positive": s.positive, "negative": s.negative })
}

fn ints(v: &[Int]) -> Value {
    Value::Array(v.iter().map(int_to_json).collect())
}

fn parse_expr(src: &str) -> Result<LatticeExpr, CliResult> {
    expr::parse(src).map_err(|e| CliResult::domain("parse", e))
}

fn invariants_json(inv: &LatticeInvariants) -> Map<String, Value> {
    let sig = inv.signature();
    let order = inv.discriminant_order();
    let det = if sig.negative % 2 == 1 { -order.clone() } else { order.clone() };
    let mut m = Map::new();
    m.insert("rank".into(), json!(inv.rank()));
    m.insert("signature".into(), signature_json(sig));
    m.insert("det".into(), int_to_json(&det));
    m.insert("invariant_factors".into(), ints(inv.invariant_factors()));
    m.insert("discriminant_order".into(), int_to_json(&order));
    m.insert("length".into(), json!(inv.length(None)));
    m
}

fn info(src: &str) -> CliResult {
    let e = match parse_expr(src) {
        Ok(e) => e,
        Err(r) => return r,
    };
    let data = match e.evaluate() {
        Ok(d) => d,
        Err(err) => return CliResult::domain("lattice", err),
    };
    let inv = data.invariants();
    let mut out = Map::new();
    out.insert("expr".into(), json!(e.to_string()));
    out.extend(invariants_json(&inv));
    let p = inv.elementary_prime();
    let mut elementary = Value::Null;
    if let Some(p) = p {
        let mut el = json!({ "p": p, "a": inv.length(Some(p)) });
        if p == 2 {
            if let Some(l) = data.lattice() {
                match l.delta_invariant() {
                    Ok(d) => el["delta"] = json!(d),
                    Err(err) => return CliResult::domain("lattice", err),
                }
            }
        }
        elementary = el;
    }
    out.insert("elementary".into(), elementary.clone());
    if let Some(l) = data.lattice() {
        let form = l.discriminant_form().summary();
        out.insert("q_values".into(), json!(form.q_values));
        out.insert("gram".into(), serde_json::to_value(l.to_json()).expect("serializable")["gram"].clone());
    }

    let mut text = String::new();
    let _ = writeln!(text, "{}", e);
    let _ = writeln!(text, "rank {}, signature {}", inv.rank(), inv.signature());
    let _ = writeln!(text, "det {}", out["det"]);
    let factors: Vec<String> = inv.invariant_factors().iter().map(|d| d.to_string()).collect();
    let _ = writeln!(text, "discriminant group: [{}]", factors.join(", "));
    match &elementary {
        Value::Null => {
            let _ = write!(text, "not p-elementary");
        }
        el => {
            let _ = write!(text, "{}-elementary, a = {}", el["p"], el["a"]);
            if let Some(d) = el.get("delta") {
                let _ = write!(text, ", delta = {d}");
            }
        }
    }
    CliResult::ok(Value::Object(out), text)
}

fn verdict_json(v: &glue::EmbeddingVerdict) -> Value {
    serde_json::to_value(v).expect("verdicts serialize")
}

fn embed(s_src: &str, w_src: &str) -> CliResult {
    let (s, w) = match (parse_expr(s_src), parse_expr(w_src)) {
        (Ok(s), Ok(w)) => (s, w),
        (Err(r), _) | (_, Err(r)) => return r,
    };
    let (sd, wd) = match (s.evaluate(), w.evaluate()) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return CliResult::domain("lattice", e),
    };
    let length = match glue::primitive_embedding_length_obstruction(&sd.invariants(), &wd.invariants()) {
        Ok(v) => v,
        Err(e) => return CliResult::domain("glue", e),
    };
    let direct = match glue::direct_summand_embedding(&s, &w) {
        Ok(v) => v,
        Err(e) => return CliResult::domain("glue", e),
    };
    let split = match &sd {
        LatticeData::Gram(l) if l.is_unimodular() => match glue::split_off_unimodular(l, &wd) {
            Ok(v) => json!({
                "exists": v.exists,
                "reason": v.reason,
                "complement": v.complement.as_ref().map(|c| Value::Object(invariants_json(c))),
            }),
            Err(e) => return CliResult::domain("glue", e),
        },
        _ => Value::Null,
    };
    let status = if length.status == glue::EmbeddingStatus::Obstructed {
        length.status
    } else {
        direct.status
    };
    let out = json!({
        "s": s.to_string(),
        "w": w.to_string(),
        "status": status,
        "length_test": verdict_json(&length),
        "direct_summand": verdict_json(&direct),
        "split_off_unimodular": split,
    });
    let mut text = format!("{} into {}: {}\n", s, w, out["status"].as_str().unwrap_or(""));
    let _ = writeln!(text, "length tests: {}", length.reason);
    let _ = write!(text, "direct summands: {}", direct.reason);
    if let Some(r) = out["split_off_unimodular"].get("reason").and_then(Value::as_str) {
        let _ = write!(text, "\nsplitting off {}: {}", s, r);
    }
    CliResult::ok(out, text)
}

fn overlattices(src: &str, index: usize) -> CliResult {
    let l = match expr::make_named(src) {
        Ok(l) => l,
        Err(e) => return CliResult::domain("lattice", e),
    };
    let found = match glue::overlattices(&l, index) {
        Ok(v) => v,
        Err(e) => return CliResult::domain("glue", e),
    };
    let list: Vec<Value> = found
        .iter()
        .map(|o| {
            let gram = serde_json::to_value(o.lattice.to_json()).expect("serializable")["gram"].clone();
            let basis: Vec<Vec<String>> = o
                .basis
                .to_rows()
                .iter()
                .map(|r| r.iter().map(rat_string).collect())
                .collect();
            json!({
                "gram": gram,
                "det": int_to_json(o.lattice.det()),
                "invariant_factors": ints(&o.lattice.invariant_factors()),
                "basis": basis,
            })
        })
        .collect();
    let mut text = format!("{} even overlattice(s) of index {index}", list.len());
    for (i, o) in found.iter().enumerate() {
        let _ = write!(text, "\n[{i}] {}", o.lattice.invariants());
    }
    CliResult::ok(
        json!({ "expr": src.trim(), "index": index, "count": list.len(), "overlattices": list }),
        text,
    )
}

fn involution(r: usize, a: usize, delta: u8) -> CliResult {
    let inv = match InvolutionInvariants::new(r, a, delta) {
        Ok(i) => i,
        Err(e) => return CliResult::domain("family", e),
    };
    let realizable = inv.is_realizable();
    let admits = admits_symplectic_involution(inv);
    let locus = involution_invariants_to_fixed_locus(inv).ok();
    let locus_json = locus.map(|fl| {
        json!({
            "kind": fl.kind,
            "curves": fl.k,
            "genus": fl.g,
            "rational_curves": fl.rational_curves(),
            "description": fl.to_string(),
        })
    });
    let mut text = format!(
        "(r, a, delta) = ({r}, {a}, {delta}): {}",
        if admits { "admits a symplectic involution" } else { "no symplectic involution" }
    );
    match locus {
        Some(fl) => {
            let _ = write!(text, "\nfixed locus: {fl}");
        }
        None => {
            let _ = write!(text, "\nno even hyperbolic 2-elementary lattice has these invariants");
        }
    }
    CliResult::ok(
        json!({
            "r": r,
            "a": a,
            "delta": delta,
            "realizable": realizable,
            "admits_symplectic": admits,
            "fixed_locus": locus_json,
        }),
        text,
    )
}

fn order3(n: usize, k: usize) -> CliResult {
    let fl = FixedLocusP3 { n, k };
    let admits = match admits_symplectic_order3(fl) {
        Ok(b) => b,
        Err(e) => return CliResult::domain("family", e),
    };
    let text = format!(
        "{n} points and {k} curves: {}",
        if admits { "admits a symplectic automorphism of order 3" } else { "no symplectic automorphism of order 3" }
    );
    CliResult::ok(
        json!({ "n": n, "k": k, "genus": fl.genus(), "admits_symplectic": admits }),
        text,
    )
}

fn parse_range(s: &str) -> Option<(i64, i64)> {
    let (lo, hi) = s.split_once(',')?;
    Some((lo.trim().parse().ok()?, hi.trim().parse().ok()?))
}

fn lefschetz_system(args: &LefschetzArgs) -> CliResult {
    let Some(m) = args.order else {
        return CliResult::usage("error: lefschetz needs --order (or the `fixture` subcommand)".into());
    };
    let convention: Convention = match args.convention.parse() {
        Ok(c) => c,
        Err(_) => {
            return CliResult::usage(format!(
                "error: unknown convention '{}' (expected matrix or fraction)",
                args.convention
            ))
        }
    };
    let h = match (&args.h, &args.h_range) {
        (Some(h), None) => CurveTerm::Fixed(*h),
        (None, Some(r)) => match parse_range(r) {
            Some((lo, hi)) => CurveTerm::Range(lo, hi),
            None => return CliResult::usage(format!("error: --h-range expects LO,HI, got '{r}'")),
        },
        _ => return CliResult::usage("error: lefschetz needs exactly one of --h and --h-range".into()),
    };
    if args.bound < 0 {
        return CliResult::usage("error: --bound must be nonnegative".into());
    }
    let hyp = FixedLocusHypothesis::new(m, &args.types, h);
    let sys = match build_system(&hyp, convention) {
        Ok(s) => s,
        Err(e) => return CliResult::domain("lefschetz", e),
    };
    let h_range = match h {
        CurveTerm::Range(lo, hi) => (lo, hi),
        CurveTerm::Fixed(v) => (v, v),
    };
    let bounds = Bounds { max_points: args.bound, h_range };
    let sols = match lefschetz::solve_nonneg(&sys, bounds) {
        Ok(s) => s,
        Err(e) => return CliResult::domain("lefschetz", e),
    };
    let unknowns: Vec<String> = sys.unknowns.iter().map(|u| u.to_string()).collect();
    let equations: Vec<Vec<String>> = (0..sys.matrix.rows())
        .map(|i| {
            sys.matrix
                .row(i)
                .iter()
                .chain(std::iter::once(&sys.rhs[i]))
                .map(rat_string)
                .collect()
        })
        .collect();
    let solutions: Vec<Value> = sols
        .iter()
        .map(|s| {
            let mut o = Map::new();
            for (t, n) in &s.points {
                o.insert(format!("n{t}"), json!(n));
            }
            o.insert("h".into(), json!(s.h));
            Value::Object(o)
        })
        .collect();
    let mut text = format!(
        "order {m}, unknowns {}: {} solution(s)",
        unknowns.join(", "),
        solutions.len()
    );
    for s in &solutions {
        let _ = write!(text, "\n{s}");
    }
    CliResult::ok(
        json!({
            "order": m,
            "convention": convention,
            "unknowns": unknowns,
            "equations": equations,
            "bound": args.bound,
            "solutions": solutions,
        }),
        text,
    )
}

fn fixture(name: &str, dir: Option<&PathBuf>) -> CliResult {
    let kind: PrintedSystemKind = match name.parse() {
        Ok(k) => k,
        Err(_) => return CliResult::usage(format!("error: unknown fixture '{name}' (expected m14 or m22)")),
    };
    let sys = match dir {
        Some(d) => match PrintedSystem::load(kind, d) {
            Ok(s) => s,
            Err(e) => return CliResult::domain("lefschetz", e),
        },
        None => PrintedSystem::builtin(kind),
    };
    let bound = 24;
    let sols = match check_printed_system(&sys, bound) {
        Ok(s) => s,
        Err(e) => return CliResult::domain("lefschetz", e),
    };
    let text = format!(
        "printed system {}: {} nonnegative solution(s) with entries <= {bound}",
        kind.key(),
        sols.len()
    );
    CliResult::ok(
        json!({
            "system": kind.key(),
            "unknowns": sys.unknowns,
            "bound": bound,
            "solutions": sols,
        }),
        text,
    )
}

fn table_rank(reg: &Registry, m: Option<u64>) -> CliResult {
    let orders: Vec<u64> = match m {
        Some(m) => vec![m],
        None => (2..=8).collect(),
    };
    let mut rows = Vec::new();
    for m in orders {
        match families::tablerank_row_with(reg, m) {
            Ok(r) => rows.push(r),
            Err(e) => return CliResult::domain("family", e),
        }
    }
    let mut text = String::from("m | rho | rankT | moduli");
    for r in &rows {
        let _ = write!(text, "\n{r}");
    }
    let value = if m.is_some() {
        serde_json::to_value(&rows[0]).expect("serializable")
    } else {
        json!({ "rows": rows })
    };
    CliResult::ok(value, text)
}

fn family(reg: &Registry, order: u64, fixed: &str) -> CliResult {
    let f = match reg.lookup(order, fixed) {
        Ok(f) => f,
        Err(e) => return CliResult::domain("family", e),
    };
    let mut text = format!("order {}, {} ({})", f.order, f.fixed, f.label);
    let _ = write!(text, "\nfixed locus: {}", f.fixed_locus.value);
    let _ = write!(
        text,
        "\nrank NS {}, rank T {}, moduli {}",
        f.ns_rank.value, f.t_rank.value, f.moduli.value
    );
    if let Some(ns) = &f.ns {
        let _ = write!(text, "\nNS = {}", ns.value);
    }
    if let Some(t) = &f.t {
        let _ = write!(text, "\nT = {}", t.value);
    }
    if let Some(s) = &f.symplectic_same_order {
        let _ = write!(text, "\nsymplectic of the same order: {}", s.value);
    }
    CliResult::ok(serde_json::to_value(f).expect("serializable"), text)
}
