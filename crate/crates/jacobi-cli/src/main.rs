//! Command-line driver: dimensions, verdicts and verification reports as JSON or CSV.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 on usage
//! errors, 3 when a computation fails. Nothing is printed on stdout unless the
//! whole report was computed.

mod cache;

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use cache::Cache;
use jacobi::bridge::{verify_bridge_with, verify_filtration, SamplePolicy};
use jacobi::catlie::outer_check;
use jacobi::diagram::json::{from_json, to_json};
use jacobi::diagram::{enumerate_diagrams, enumerate_structures, Canonical, CanonicalDiagram};
use jacobi::freegroup::BeadAlphabet;
use jacobi::handlebody::{a_space, cross_effect_dim, gr_laws, homotopy_invariance, hopf_axioms, ASpace, FunctorKind, FunctorSpec};
use jacobi::reference::{a11_reference_dim, b_d0_reference, b_di_dim};
use jacobi::relations::{j_space, JSpace};
use jacobi::report::{all_pass, Check};
use jacobi::DiagramVector;

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(name = "jacobi-cli", version, about = "Spaces of beaded Jacobi diagrams and their functors")]
struct Cli {
    /// Output format; CSV prints the records table, or the checks when there are no records.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Cache directory for computed spaces; defaults to $JACOBI_CACHE_DIR, else no cache.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

/// A list such as `3`, `1,2,4` or `1..4` (inclusive).
#[derive(Clone, Debug, Serialize)]
#[serde(transparent)]
struct Sizes(Vec<usize>);

impl FromStr for Sizes {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let mut out = Vec::new();
        for part in s.split(',') {
            let part = part.trim();
            if let Some((a, b)) = part.split_once("..") {
                let (a, b): (usize, usize) = (a.parse().map_err(|e| format!("{a}: {e}"))?, b.parse().map_err(|e| format!("{b}: {e}"))?);
                if a > b {
                    return Err(format!("empty range {part}"));
                }
                out.extend(a..=b);
            } else {
                out.push(part.parse().map_err(|e| format!("{part}: {e}"))?);
            }
        }
        Ok(Sizes(out))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Dimensions of J_d(m) with beads in the alphabet.
    DimJ(DimJ),
    /// Dimensions of A_d(n, m), optionally restricted to class 0 or a filtration level.
    DimA(DimA),
    /// Whether the sum of the μ_i vanishes on J_d at every arity below 2d.
    OuterCheck(Outer),
    /// Dimension of the k-th cross-effect of A_d(n, -) or A_d(n, -)_0.
    CrossEffect(Cross),
    #[command(subcommand)]
    Verify(Verify),
    /// Canonical diagrams of J_d(m) before relations.
    Enumerate(Enumerate),
    /// Canonical form of a diagram given as JSON in a file or on stdin.
    Canonical(CanonicalArgs),
    #[command(subcommand)]
    Reference(Reference),
}

#[derive(Subcommand)]
enum Verify {
    /// Gluing legs onto arcs against A_d(n, l)_0.
    Bridge(Bridge),
    /// Truncated gluing against the filtration level t.
    Filtration(Filtration),
    /// The degree-one closed form against class-0 and full arc spaces.
    A11(A11Verify),
    /// The graded piece B_{d,0} by coinvariants against the Schur sum.
    #[command(name = "b_d0")]
    BD0(BD0),
    /// Both antipode axioms on the spanning set.
    HopfAxioms(ASpaceArgs),
    /// Coalgebra, unit and antipode laws, relations and gradings on the spanning set.
    GrLaws(ASpaceArgs),
}

#[derive(Subcommand)]
enum Reference {
    /// Σ over partitions λ of d of dim S_{2λ}(K^m).
    #[command(name = "b_d0")]
    BD0(BD0),
    /// The degree-one closed form.
    A11(A11Reference),
}

#[derive(Args, Serialize)]
struct DimJ {
    #[arg(long)]
    d: usize,
    #[arg(long)]
    m: Sizes,
    #[arg(long, default_value = "trivial")]
    alphabet: String,
}

#[derive(Args, Serialize)]
struct DimA {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    m: Sizes,
    #[arg(long)]
    d: usize,
    #[arg(long, default_value = "trivial")]
    alphabet: String,
    #[arg(long)]
    class0: bool,
    #[arg(long, default_value_t = 0)]
    min_trivalent: usize,
}

#[derive(Args, Serialize)]
struct Outer {
    #[arg(long)]
    d: usize,
    #[arg(long, default_value = "trivial")]
    alphabet: String,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum Functor {
    /// A_d(n, -).
    #[value(name = "a_d")]
    AD,
    /// A_d(n, -)_0.
    #[value(name = "a_d0")]
    AD0,
}

#[derive(Args, Serialize)]
struct Cross {
    #[arg(long, value_enum)]
    functor: Functor,
    #[arg(long)]
    n: u32,
    #[arg(long)]
    d: usize,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value = "trivial")]
    alphabet: String,
}

#[derive(Args, Serialize)]
struct Bridge {
    #[arg(long)]
    d: usize,
    #[arg(long, default_value = "trivial")]
    alphabet: String,
    #[arg(long)]
    l: usize,
    #[arg(long, default_value_t = SamplePolicy::default().seed)]
    seed: u64,
    /// Sampled maps per arity when d exceeds --exhaustive-up-to.
    #[arg(long, default_value_t = SamplePolicy::default().samples)]
    samples: usize,
    #[arg(long, default_value_t = SamplePolicy::default().exhaustive_up_to)]
    exhaustive_up_to: usize,
}

#[derive(Args, Serialize)]
struct Filtration {
    #[arg(long)]
    d: usize,
    #[arg(long, default_value = "trivial")]
    alphabet: String,
    #[arg(long)]
    l: usize,
    #[arg(long)]
    t: usize,
}

#[derive(Args, Serialize)]
struct A11Verify {
    #[arg(long, default_value = "trivial")]
    alphabet: String,
    /// Rank of the free group; defaults to the alphabet's rank.
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    m: Sizes,
}

#[derive(Args, Serialize)]
struct A11Reference {
    #[arg(long, default_value = "trivial")]
    alphabet: String,
    #[arg(long)]
    m: Sizes,
}

#[derive(Args, Serialize)]
struct BD0 {
    #[arg(long)]
    d: usize,
    #[arg(long)]
    m: Sizes,
}

#[derive(Args, Serialize)]
struct ASpaceArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    d: usize,
    #[arg(long, default_value = "trivial")]
    alphabet: String,
    #[arg(long)]
    class0: bool,
}

#[derive(Args, Serialize)]
struct Enumerate {
    #[arg(long)]
    d: usize,
    #[arg(long)]
    m: usize,
    #[arg(long, default_value = "trivial")]
    alphabet: String,
    /// Unbeaded shapes only, ignoring the alphabet.
    #[arg(long)]
    structures: bool,
}

#[derive(Args, Serialize)]
struct CanonicalArgs {
    /// JSON diagram file, or `-` for stdin.
    #[arg(long, default_value = "-")]
    input: PathBuf,
}

#[derive(Serialize)]
struct Report {
    schema_version: u32,
    command: &'static str,
    params: Value,
    pass: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    checks: Vec<Check>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    records: Vec<Value>,
}

impl Report {
    fn new(command: &'static str, params: &impl Serialize) -> Result<Self> {
        Ok(Report { schema_version: SCHEMA_VERSION, command, params: serde_json::to_value(params)?, pass: true, checks: Vec::new(), records: Vec::new() })
    }

    fn with_records(mut self, records: Vec<Value>) -> Self {
        self.records = records;
        self
    }

    fn with_checks(mut self, checks: Vec<Check>) -> Self {
        self.pass = all_pass(&checks);
        self.checks = checks;
        self
    }
}

fn alphabet(spec: &str) -> Result<BeadAlphabet> {
    BeadAlphabet::parse_spec(spec).with_context(|| format!("alphabet {spec:?}"))
}

fn check(name: &str, pass: bool, detail: impl FnOnce() -> String) -> Check {
    Check::new(name, (!pass).then(detail))
}

fn diagram_json(c: &CanonicalDiagram) -> Value {
    to_json(&c.to_diagram())
}

fn vector_json(v: &DiagramVector) -> Value {
    Value::Array(v.iter().map(|(c, q)| json!({ "coefficient": q.to_string(), "diagram": diagram_json(c) })).collect())
}

fn cached_j(cache: &Cache, d: usize, m: usize, spec: &str) -> Result<JSpace> {
    let beads = alphabet(spec)?;
    Ok(cache.get_or_compute("j_space", &(d, m, &beads.label), || Ok(j_space(d, m, &beads)?))?.0)
}

fn cached_a(cache: &Cache, n: u32, m: usize, d: usize, spec: &str, class0: bool, t: usize) -> Result<ASpace> {
    let beads = alphabet(spec)?;
    let key = (n, m, d, &beads.label, class0, t);
    Ok(cache.get_or_compute("a_space", &key, || Ok(a_space(n, m, d, &beads, class0, t)?))?.0)
}

fn run(cli: &Cli) -> Result<Report> {
    let cache = Cache::from_option(cli.cache_dir.clone());
    match &cli.command {
        Command::DimJ(a) => {
            let mut records = Vec::new();
            for &m in &a.m.0 {
                let s = cached_j(&cache, a.d, m, &a.alphabet)?;
                records.push(json!({
                    "d": a.d, "m": m, "alphabet": s.alphabet,
                    "dim": s.dim(), "span_size": s.span().len(), "relation_rank": s.relation_rank(),
                }));
            }
            Ok(Report::new("dim-j", a)?.with_records(records))
        }
        Command::DimA(a) => {
            let mut records = Vec::new();
            for &m in &a.m.0 {
                let s = cached_a(&cache, a.n, m, a.d, &a.alphabet, a.class0, a.min_trivalent)?;
                records.push(json!({
                    "n": a.n, "m": m, "d": a.d, "alphabet": s.params.alphabet, "class0": a.class0,
                    "min_trivalent": a.min_trivalent, "dim": s.dim(), "span_size": s.span().len(),
                    "relation_rank": s.relation_rank(),
                }));
            }
            Ok(Report::new("dim-a", a)?.with_records(records))
        }
        Command::OuterCheck(a) => {
            let r = outer_check(a.d, &alphabet(&a.alphabet)?)?;
            let witness = r.witness.as_ref().map(|w| json!({ "k": w.k, "source": diagram_json(&w.source), "image": vector_json(&w.image) }));
            let verdict = check("outer", r.outer, || format!("μ is nonzero at arity {}", r.witness.as_ref().map_or(0, |w| w.k)));
            let record = json!({ "d": r.d, "alphabet": r.alphabet, "outer": r.outer, "witness": witness });
            Ok(Report::new("outer-check", a)?.with_records(vec![record]).with_checks(vec![verdict]))
        }
        Command::CrossEffect(a) => {
            let kind = match a.functor {
                Functor::AD => FunctorKind::Full,
                Functor::AD0 => FunctorKind::Class0,
            };
            let spec = FunctorSpec { kind, n: a.n, d: a.d, alphabet: alphabet(&a.alphabet)? };
            let dim = cross_effect_dim(&spec, a.k)?;
            let record = json!({ "functor": a.functor, "n": a.n, "d": a.d, "k": a.k, "alphabet": spec.alphabet.label, "dim": dim });
            Ok(Report::new("cross-effect", a)?.with_records(vec![record]))
        }
        Command::Verify(v) => verify(&cache, v),
        Command::Enumerate(a) => {
            let found = if a.structures { enumerate_structures(a.d, a.m) } else { enumerate_diagrams(a.d, a.m, &alphabet(&a.alphabet)?) };
            let records = found.iter().enumerate().map(|(i, c)| json!({ "index": i, "diagram": diagram_json(c) })).collect();
            Ok(Report::new("enumerate", a)?.with_records(records))
        }
        Command::Canonical(a) => {
            let text = if a.input.as_os_str() == "-" {
                let mut s = String::new();
                std::io::stdin().read_to_string(&mut s)?;
                s
            } else {
                std::fs::read_to_string(&a.input).with_context(|| format!("reading {}", a.input.display()))?
            };
            let value: Value = serde_json::from_str(&text).context("parsing diagram JSON")?;
            let record = match from_json(&value)?.canonicalize() {
                Canonical::Zero => json!({ "zero": true }),
                Canonical::Nonzero { diagram, sign } => json!({ "zero": false, "sign": sign, "diagram": diagram_json(&diagram) }),
            };
            Ok(Report::new("canonical", a)?.with_records(vec![record]))
        }
        Command::Reference(Reference::BD0(a)) => {
            let records = a.m.0.iter().map(|&m| json!({ "d": a.d, "m": m, "dim": b_d0_reference(a.d, m) })).collect();
            Ok(Report::new("reference b_d0", a)?.with_records(records))
        }
        Command::Reference(Reference::A11(a)) => {
            let beads = alphabet(&a.alphabet)?;
            let mut records = Vec::new();
            for &m in &a.m.0 {
                records.push(json!({ "alphabet": beads.label, "m": m, "dim": a11_reference_dim(&beads, m)? }));
            }
            Ok(Report::new("reference a11", a)?.with_records(records))
        }
    }
}

fn verify(cache: &Cache, v: &Verify) -> Result<Report> {
    match v {
        Verify::Bridge(a) => {
            let policy = SamplePolicy { seed: a.seed, samples: a.samples, exhaustive_up_to: a.exhaustive_up_to };
            let r = verify_bridge_with(a.d, &alphabet(&a.alphabet)?, a.l, &policy)?;
            Ok(Report::new("verify bridge", a)?.with_checks(r.checks))
        }
        Verify::Filtration(a) => {
            let r = verify_filtration(a.d, &alphabet(&a.alphabet)?, a.l, a.t)?;
            let c = check("filtration", r.pass, || format!("truncated gluing has dim {}, filtration level has dim {}", r.alpha_dim, r.a_dim));
            Ok(Report::new("verify filtration", a)?.with_records(vec![serde_json::to_value(&r)?]).with_checks(vec![c]))
        }
        Verify::A11(a) => {
            let beads = alphabet(&a.alphabet)?;
            let n = a.n.unwrap_or(beads.rank);
            let (mut checks, mut records) = (Vec::new(), Vec::new());
            for &m in &a.m.0 {
                let reference = a11_reference_dim(&beads, m)?;
                let class0 = cached_a(cache, n, m, 1, &a.alphabet, true, 0)?.dim();
                let full = cached_a(cache, n, m, 1, &a.alphabet, false, 0)?.dim();
                let classes = beads.len().pow(m as u32);
                checks.push(check(&format!("class0_m{m}"), class0 == reference, || format!("{class0} vs {reference}")));
                checks.push(check(&format!("full_m{m}"), full == reference * classes, || format!("{full} vs {reference} x {classes}")));
                records.push(json!({ "alphabet": beads.label, "n": n, "m": m, "reference": reference, "class0_dim": class0, "full_dim": full }));
            }
            Ok(Report::new("verify a11", a)?.with_records(records).with_checks(checks))
        }
        Verify::BD0(a) => {
            let (mut checks, mut records) = (Vec::new(), Vec::new());
            for &m in &a.m.0 {
                let coinvariants = b_di_dim(a.d, 0, m)?;
                let schur = b_d0_reference(a.d, m);
                checks.push(check(&format!("b_d0_m{m}"), coinvariants == schur, || format!("{coinvariants} vs {schur}")));
                records.push(json!({ "d": a.d, "m": m, "coinvariants": coinvariants, "schur": schur }));
            }
            Ok(Report::new("verify b_d0", a)?.with_records(records).with_checks(checks))
        }
        Verify::HopfAxioms(a) => {
            let s = cached_a(cache, a.n, a.m, a.d, &a.alphabet, a.class0, 0)?;
            Ok(Report::new("verify hopf-axioms", a)?.with_checks(hopf_axioms(&s)?))
        }
        Verify::GrLaws(a) => {
            let s = cached_a(cache, a.n, a.m, a.d, &a.alphabet, a.class0, 0)?;
            let mut checks = gr_laws(&s)?;
            checks.push(homotopy_invariance(&s));
            Ok(Report::new("verify gr-laws", a)?.with_checks(checks))
        }
    }
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn render(report: &Report, format: Format) -> Result<String> {
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(report)? + "\n"),
        Format::Csv => {
            let rows: Vec<Value> = if report.records.is_empty() {
                report.checks.iter().map(serde_json::to_value).collect::<serde_json::Result<_>>()?
            } else {
                report.records.clone()
            };
            let mut columns: Vec<String> = Vec::new();
            for row in &rows {
                let Value::Object(map) = row else { bail!("record is not an object") };
                columns.extend(map.keys().filter(|k| !columns.contains(k)).cloned().collect::<Vec<_>>());
            }
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&columns)?;
            for row in &rows {
                w.write_record(columns.iter().map(|c| csv_cell(row.get(c).unwrap_or(&Value::Null))))?;
            }
            Ok(String::from_utf8(w.into_inner()?)?)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli).and_then(|r| Ok((render(&r, cli.format)?, r.pass))) {
        Ok((out, pass)) => {
            print!("{out}");
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
    }
}
