//! Command-line front end: `classify`, `verify`, `numata` and `fixtures`.
//!
//! Exit codes: 0 success, 1 usage error, 2 fixture validation or evaluation
//! failure, 3 an identity exceeded its tolerance (`verify` only).

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::analysis::{
    self, numata_pipeline, ClassificationReport, IdentityOutcome, NumataReport, Status, Tolerances, Verdict,
};
use crate::error::FinslerError;
use crate::metrics::{builtin_fixture, fixture_defaults, fixture_summary, MetricFixture, SampleSpec, FIXTURE_NAMES};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_FIXTURE: i32 = 2;
pub const EXIT_IDENTITY: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "finsler", version, about = "Numerical Finsler geometry: classification and identity checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the classification predicates on sampled points.
    Classify(RunArgs),
    /// Run every identity check applicable to the fixture.
    Verify(RunArgs),
    /// Check the Landsberg / non-zero scalar curvature hypothesis and, when
    /// it holds, the rigidity conclusion and its identity chain.
    Numata(RunArgs),
    /// List the built-in fixtures.
    Fixtures(FixturesArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Output {
    Text,
    Json,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub fixture: String,
    #[arg(long, default_value_t = 3)]
    pub dim: usize,
    /// Curvature of riemann-const-k.
    #[arg(long, allow_negative_numbers = true)]
    pub k: Option<f64>,
    /// Coupling of quartic-minkowski.
    #[arg(long, allow_negative_numbers = true)]
    pub c: Option<f64>,
    /// Any fixture parameter, as KEY=VALUE. Repeatable.
    #[arg(long = "param", value_name = "KEY=VALUE", value_parser = parse_param)]
    pub params: Vec<(String, f64)>,
    #[arg(long, default_value_t = 30)]
    pub samples: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-6)]
    pub tol_identity: f64,
    #[arg(long, default_value_t = 1e-7)]
    pub tol_zero: f64,
    #[arg(long, value_enum, default_value_t = Output::Text)]
    pub output: Output,
    /// Also write the report to this file.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads for point evaluation; results do not depend on it.
    #[arg(long, env = "FINSLER_THREADS")]
    pub threads: Option<usize>,
}

#[derive(Debug, Args)]
pub struct FixturesArgs {
    #[arg(long, value_enum, default_value_t = Output::Text)]
    pub output: Output,
}

fn parse_param(s: &str) -> Result<(String, f64), String> {
    let (key, value) = s.split_once('=').ok_or_else(|| format!("expected KEY=VALUE, got `{s}`"))?;
    let v: f64 = value.trim().parse().map_err(|e| format!("bad value for `{key}`: {e}"))?;
    Ok((key.trim().to_string(), v))
}

fn exit_code(e: &FinslerError) -> i32 {
    match e {
        FinslerError::UnknownFixture { .. }
        | FinslerError::InvalidParams { .. }
        | FinslerError::InvalidArgument(_)
        | FinslerError::Refused(_)
        | FinslerError::NotJetCapable(_) => EXIT_USAGE,
        FinslerError::OutsideDomain { .. }
        | FinslerError::DegenerateMetric { .. }
        | FinslerError::FixtureInvalid { .. }
        | FinslerError::SamplingExhausted { .. }
        | FinslerError::Jet(_) => EXIT_FIXTURE,
    }
}

struct Prepared {
    fixture: MetricFixture,
    spec: SampleSpec,
    tol: Tolerances,
}

fn prepare(a: &RunArgs) -> Result<Prepared, FinslerError> {
    let mut params = BTreeMap::new();
    let named = a.k.map(|v| ("k".to_string(), v)).into_iter().chain(a.c.map(|v| ("c".to_string(), v)));
    for (key, value) in named.chain(a.params.iter().cloned()) {
        if params.insert(key.clone(), value).is_some() {
            return Err(FinslerError::InvalidArgument(format!("parameter `{key}` given twice")));
        }
    }
    let fixture = builtin_fixture(&a.fixture, a.dim, &params)?;
    if a.samples == 0 {
        return Err(FinslerError::InvalidArgument("--samples must be at least 1".into()));
    }
    let tol = Tolerances::new(a.tol_identity, a.tol_zero)?;
    Ok(Prepared {
        fixture,
        spec: SampleSpec::new(a.samples, a.seed),
        tol,
    })
}

fn verdict_json(v: &Verdict) -> Value {
    json!({
        "holds": v.holds,
        "max_residual": v.max_residual,
        "tolerance": v.tolerance,
        "trivial": v.trivial,
    })
}

fn verdicts_json(c: &ClassificationReport) -> Map<String, Value> {
    let mut m = Map::new();
    for (name, v) in c.verdicts() {
        m.insert(name.into(), verdict_json(v));
    }
    let s = &c.scalar;
    m.insert(
        "r".into(),
        json!({
            "mean": s.r_mean,
            "min": s.r_min,
            "max": s.r_max,
            "stdev": s.r_stdev,
            "flat_points": s.flat_points,
            "nonzero": s.nonzero_r,
            "low_dimension": s.low_dimension,
        }),
    );
    m
}

fn identity_json(o: &IdentityOutcome) -> Value {
    json!({
        "id": o.id,
        "anchor": o.statement,
        "gate": o.gate,
        "status": o.status,
        "max_residual": o.max_residual,
        "tolerance": o.tolerance,
        "points": o.points,
        "trivial": o.trivial,
        "note": o.note,
    })
}

fn witnesses_json(c: &ClassificationReport, ids: &[IdentityOutcome]) -> Map<String, Value> {
    let mut m = Map::new();
    for (name, v) in c.verdicts() {
        if let Some(w) = &v.witness {
            m.insert(format!("verdict:{name}"), json!(w));
        }
    }
    for o in ids {
        if let Some(w) = &o.witness {
            m.insert(format!("identity:{}", o.id.name()), json!(w));
        }
    }
    m
}

fn document(command: &str, p: &Prepared, verdicts: Map<String, Value>, ids: &[IdentityOutcome], witnesses: Map<String, Value>) -> Value {
    json!({
        "meta": {
            "command": command,
            "version": env!("CARGO_PKG_VERSION"),
            "samples": p.spec.count,
            "seed": p.spec.seed,
            "tolerances": { "identity": p.tol.identity, "zero": p.tol.zero },
        },
        "fixture": {
            "name": p.fixture.name(),
            "dim": p.fixture.dim(),
            "params": p.fixture.params(),
        },
        "verdicts": verdicts,
        "identities": ids.iter().map(identity_json).collect::<Vec<_>>(),
        "witnesses": witnesses,
    })
}

fn fmt_residual(r: Option<f64>) -> String {
    r.map(|v| format!("{v:.3e}")).unwrap_or_else(|| "-".into())
}

fn text_header(out: &mut String, command: &str, p: &Prepared) {
    let params: Vec<String> = p.fixture.params().iter().map(|(k, v)| format!("{k}={v}")).collect();
    let _ = writeln!(
        out,
        "{command}: {} n={} [{}] samples={} seed={} tol-identity={:e} tol-zero={:e}",
        p.fixture.name(),
        p.fixture.dim(),
        params.join(", "),
        p.spec.count,
        p.spec.seed,
        p.tol.identity,
        p.tol.zero
    );
}

fn text_verdicts(out: &mut String, c: &ClassificationReport) {
    let _ = writeln!(out, "{:<18} {:<6} {:>12} {:>10}  note", "predicate", "holds", "max-resid", "tol");
    for (name, v) in c.verdicts() {
        let _ = writeln!(
            out,
            "{:<18} {:<6} {:>12} {:>10.1e}  {}",
            name,
            v.holds,
            fmt_residual(Some(v.max_residual)),
            v.tolerance,
            if v.trivial { "trivial" } else { "" }
        );
    }
    let s = &c.scalar;
    let _ = writeln!(
        out,
        "r: mean={:.9} stdev={:.3e} range=[{:.9}, {:.9}] flat-points={}{}",
        s.r_mean,
        s.r_stdev,
        s.r_min,
        s.r_max,
        s.flat_points,
        if s.low_dimension { " (n < 3: informational)" } else { "" }
    );
}

fn text_identities(out: &mut String, ids: &[IdentityOutcome]) {
    let _ = writeln!(out, "{:<38} {:<8} {:>12}  note", "identity", "status", "max-resid");
    for o in ids {
        let status = format!("{:?}", o.status).to_lowercase();
        let mut note = o.note.clone().unwrap_or_default();
        if o.trivial && !note.contains("trivial") {
            note = format!("trivial: {note}");
        }
        let _ = writeln!(out, "{:<38} {:<8} {:>12}  {}", o.id.name(), status, fmt_residual(o.max_residual), note);
    }
}

struct Rendered {
    text: String,
    json: Value,
    code: i32,
}

fn run_classify(p: &Prepared, threads: Option<usize>) -> Result<Rendered, FinslerError> {
    let c = analysis::classify(&p.fixture, &p.spec, p.tol, threads)?;
    let mut text = String::new();
    text_header(&mut text, "classify", p);
    text_verdicts(&mut text, &c);
    let json = document("classify", p, verdicts_json(&c), &[], witnesses_json(&c, &[]));
    Ok(Rendered { text, json, code: EXIT_OK })
}

fn run_verify(p: &Prepared, threads: Option<usize>) -> Result<Rendered, FinslerError> {
    let report = analysis::verify(&p.fixture, &p.spec, p.tol, threads)?;
    let c = &report.classification;
    let mut text = String::new();
    text_header(&mut text, "verify", p);
    text_verdicts(&mut text, c);
    text_identities(&mut text, &report.identities);
    let count = |s: Status| report.identities.iter().filter(|o| o.status == s).count();
    let _ = writeln!(
        text,
        "pass={} fail={} vacuous={} refused={}",
        count(Status::Pass),
        count(Status::Fail),
        count(Status::Vacuous),
        count(Status::Refused)
    );
    let json = document(
        "verify",
        p,
        verdicts_json(c),
        &report.identities,
        witnesses_json(c, &report.identities),
    );
    let code = if report.all_pass() { EXIT_OK } else { EXIT_IDENTITY };
    Ok(Rendered { text, json, code })
}

fn numata_json(r: &NumataReport) -> Value {
    json!({
        "hypothesis": r.hypothesis,
        "conclusion": r.conclusion,
        "chain_max_residual": r.chain_max_residual,
        "summary": r.summary,
    })
}

fn run_numata(p: &Prepared, threads: Option<usize>) -> Result<Rendered, FinslerError> {
    let r = numata_pipeline(&p.fixture, &p.spec, p.tol, threads)?;
    let c = &r.classification;
    let mut text = String::new();
    text_header(&mut text, "numata", p);
    text_verdicts(&mut text, c);
    let h = &r.hypothesis;
    let _ = writeln!(
        text,
        "hypothesis: {} (landsberg={} scalar-curvature={} r-nonzero={})",
        if h.holds { "holds" } else { "fails" },
        h.landsberg,
        h.scalar_curvature,
        h.nonzero_r
    );
    for leg in &h.failed_legs {
        let _ = writeln!(text, "  failed leg: {leg}");
    }
    if let Some(cn) = &r.conclusion {
        let _ = writeln!(
            text,
            "conclusion: {} (riemannian={} constant-r={} r={:.9})",
            if cn.holds { "holds" } else { "fails" },
            cn.riemannian,
            cn.constant_r,
            cn.r
        );
        text_identities(&mut text, &r.chain);
    }
    let _ = writeln!(text, "{}", r.summary);
    let mut verdicts = verdicts_json(c);
    verdicts.insert("numata".into(), numata_json(&r));
    let json = document("numata", p, verdicts, &r.chain, witnesses_json(c, &r.chain));
    Ok(Rendered { text, json, code: EXIT_OK })
}

fn run_fixtures(a: &FixturesArgs, stdout: &mut dyn Write) -> i32 {
    let rows: Vec<(&str, &[(&str, f64)], &str)> = FIXTURE_NAMES
        .iter()
        .map(|&n| (n, fixture_defaults(n).unwrap_or(&[]), fixture_summary(n).unwrap_or("")))
        .collect();
    let body = match a.output {
        Output::Json => {
            let list: Vec<Value> = rows
                .iter()
                .map(|(name, defaults, summary)| {
                    let d: Map<String, Value> = defaults.iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
                    json!({ "name": name, "defaults": d, "summary": summary })
                })
                .collect();
            format!("{}\n", serde_json::to_string_pretty(&list).expect("serializable"))
        }
        Output::Text => {
            let mut s = String::new();
            for (name, defaults, summary) in rows {
                let d: Vec<String> = defaults.iter().map(|(k, v)| format!("{k}={v}")).collect();
                let _ = writeln!(s, "{name:<18} {:<30} {summary}", d.join(" "));
            }
            s
        }
    };
    let _ = stdout.write_all(body.as_bytes());
    EXIT_OK
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{}", e.render());
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{}", e.render());
                    EXIT_USAGE
                }
            };
        }
    };
    let (name, a) = match &cli.command {
        Command::Fixtures(f) => return run_fixtures(f, stdout),
        Command::Classify(a) => ("classify", a),
        Command::Verify(a) => ("verify", a),
        Command::Numata(a) => ("numata", a),
    };
    let result = prepare(a).and_then(|p| match name {
        "classify" => run_classify(&p, a.threads),
        "verify" => run_verify(&p, a.threads),
        _ => run_numata(&p, a.threads),
    });
    let rendered = match result {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return exit_code(&e);
        }
    };
    let json = format!("{}\n", serde_json::to_string_pretty(&rendered.json).expect("serializable"));
    let body = match a.output {
        Output::Text => &rendered.text,
        Output::Json => &json,
    };
    let _ = stdout.write_all(body.as_bytes());
    if let Some(path) = &a.out {
        if let Err(e) = std::fs::write(path, body) {
            let _ = writeln!(stderr, "error: cannot write {}: {e}", path.display());
            return EXIT_USAGE;
        }
    }
    rendered.code
}
