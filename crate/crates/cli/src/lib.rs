//! Command-line front end for the `fourfold` library.
//!
//! [`run`] takes the full argument vector and returns the exit code together
//! with everything that would be written to stdout and stderr, so the binary
//! is a thin wrapper and the behaviour is testable in-process.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;

use fourfold::alpha::form::QuadraticFormSpace;
use fourfold::alpha::oracle::MAX_DIMENSION;
use fourfold::alpha::{
    alpha_brute_oracle, alpha_squared, alpha_squared_numeric, AlphaError, NumericOptions,
};
use fourfold::curvature::{builtin_models, check_model, CurvatureError, ModelReport};
use fourfold::obstruction::{evaluate, freedman_class, homeomorphic, Evaluation, ObstructionError};
use fourfold::report::{
    AlphaExprReport, AlphaReport, BatchItem, BatchReport, ErrorReport, EvalReport, HomeoReport,
    InvariantsReport, ModelRow, ModelsReport, NumericReport, OracleReport, SCHEMA_VERSION,
};
use fourfold::{invariants, parse, ExprError, InvariantError, Manifold, Rational};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_INTERNAL: i32 = 2;
pub const EXIT_MODEL_CHECK: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "fourfold",
    version,
    about = "Invariants and Einstein-metric verdicts for smooth 4-manifolds"
)]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Einstein-metric verdict for an expression.
    Eval {
        expr: String,
        /// Print every check behind the verdict.
        #[arg(long)]
        certificate: bool,
    },
    /// Exact invariants of an expression.
    Invariants { expr: String },
    /// Homeomorphism test for two expressions.
    Homeo { left: String, right: String },
    /// Alpha squared from the catalog, or numerically from a form and classes.
    Alpha {
        #[arg(required_unless_present = "form", conflicts_with = "form")]
        expr: Option<String>,
        /// Intersection form: one row per line.
        #[arg(long, requires = "classes")]
        form: Option<PathBuf>,
        /// Candidate classes: one vector per line.
        #[arg(long, requires = "form")]
        classes: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-6)]
        tolerance: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 4000)]
        max_iter: usize,
        #[arg(long, default_value_t = 16)]
        starts: usize,
        /// Grid points per axis for the brute-force cross-check.
        #[arg(long, default_value_t = 9)]
        grid_density: usize,
        /// Skip the brute-force cross-check.
        #[arg(long)]
        no_oracle: bool,
    },
    /// Curvature model catalog.
    Models {
        /// Verify every curvature identity; exit code 3 on failure.
        #[arg(long)]
        check: bool,
    },
    /// Evaluate one expression per line; lines starting with `#` are skipped.
    Batch {
        file: PathBuf,
        #[arg(long)]
        certificate: bool,
    },
}

/// Exit code and captured output of one invocation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Failure {
    code: i32,
    report: Box<ErrorReport>,
    /// Expression the error points into, for the caret display.
    source: Option<String>,
}

impl Failure {
    fn new(code: i32, kind: &str, message: impl Into<String>) -> Self {
        Failure {
            code,
            report: Box::new(ErrorReport {
                schema_version: SCHEMA_VERSION,
                kind: kind.into(),
                message: message.into(),
                position: None,
                expected: Vec::new(),
            }),
            source: None,
        }
    }

    fn expr(text: &str, e: ExprError) -> Self {
        let (kind, expected) = match &e {
            ExprError::Parse(p) => ("parse", p.expected.iter().cloned().collect()),
            ExprError::Domain { .. } => ("domain", Vec::new()),
        };
        let mut f = Failure::new(EXIT_INPUT, kind, e.to_string());
        f.report.position = Some(e.position());
        f.report.expected = expected;
        f.source = Some(text.to_string());
        f
    }

    fn render(&self) -> String {
        let mut out = format!("error: {}\n", self.report.message);
        if let (Some(src), Some(pos)) = (&self.source, self.report.position) {
            let _ = writeln!(out, "  {src}\n  {}^", " ".repeat(pos.min(src.len())));
        }
        out
    }
}

impl From<InvariantError> for Failure {
    fn from(e: InvariantError) -> Self {
        match e {
            InvariantError::Consistency(_) => {
                Failure::new(EXIT_INTERNAL, "internal", e.to_string())
            }
            _ => Failure::new(EXIT_INPUT, "domain", e.to_string()),
        }
    }
}

impl From<ObstructionError> for Failure {
    fn from(e: ObstructionError) -> Self {
        match e {
            ObstructionError::Invariant(inner) => inner.into(),
            ObstructionError::Consistency(_) => {
                Failure::new(EXIT_INTERNAL, "internal", e.to_string())
            }
            _ => Failure::new(EXIT_INPUT, "domain", e.to_string()),
        }
    }
}

impl From<AlphaError> for Failure {
    fn from(e: AlphaError) -> Self {
        match e {
            AlphaError::Invariant(inner) => inner.into(),
            _ => Failure::new(EXIT_INPUT, "input", e.to_string()),
        }
    }
}

type Result<T> = std::result::Result<T, Failure>;

fn parse_expr(text: &str) -> Result<Manifold> {
    parse(text).map_err(|e| Failure::expr(text, e))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

/// Runs one invocation. The first element of `args` is the program name.
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let json_requested = args.iter().any(|a| a == "--json");
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return Output {
                    code: EXIT_OK,
                    stdout: e.to_string(),
                    stderr: String::new(),
                };
            }
            let text = e.to_string();
            let message = text.trim_end().trim_start_matches("error: ");
            let f = Failure::new(EXIT_INPUT, "usage", message);
            return failure_output(&f, json_requested);
        }
    };
    match dispatch(&cli) {
        Ok((code, stdout)) => Output {
            code,
            stdout,
            stderr: String::new(),
        },
        Err(f) => failure_output(&f, cli.json),
    }
}

fn failure_output(f: &Failure, json: bool) -> Output {
    if json {
        Output {
            code: f.code,
            stdout: to_json(&f.report),
            stderr: String::new(),
        }
    } else {
        Output {
            code: f.code,
            stdout: String::new(),
            stderr: f.render(),
        }
    }
}

fn dispatch(cli: &Cli) -> Result<(i32, String)> {
    let json = cli.json;
    match &cli.command {
        Command::Eval { expr, certificate } => {
            let e = evaluate(&parse_expr(expr)?)?;
            Ok((
                EXIT_OK,
                if json {
                    to_json(&EvalReport::from(&e))
                } else {
                    eval_text(&e, *certificate)
                },
            ))
        }
        Command::Invariants { expr } => {
            let m = parse_expr(expr)?;
            let record = invariants(&m)?;
            let report = InvariantsReport {
                schema_version: SCHEMA_VERSION,
                expr: m.to_string(),
                record,
            };
            Ok((
                EXIT_OK,
                if json {
                    to_json(&report)
                } else {
                    invariants_text(&report)
                },
            ))
        }
        Command::Homeo { left, right } => {
            let report = homeo(left, right)?;
            Ok((
                EXIT_OK,
                if json {
                    to_json(&report)
                } else {
                    homeo_text(&report)
                },
            ))
        }
        Command::Alpha {
            expr: Some(expr), ..
        } => {
            let m = parse_expr(expr)?;
            let record = invariants(&m)?;
            let alpha = alpha_squared(&m, &record);
            let report = AlphaExprReport {
                schema_version: SCHEMA_VERSION,
                expr: m.to_string(),
                alpha_sq: AlphaReport::from(&alpha),
            };
            Ok((
                EXIT_OK,
                if json {
                    to_json(&report)
                } else {
                    alpha_text(&report, &alpha.status.to_string())
                },
            ))
        }
        Command::Alpha {
            expr: None,
            form,
            classes,
            tolerance,
            seed,
            max_iter,
            starts,
            grid_density,
            no_oracle,
        } => {
            let form = form.as_deref().expect("clap requires --form");
            let classes = classes.as_deref().expect("clap requires --classes");
            let space = QuadraticFormSpace::from_text(&read(form)?, &read(classes)?)?;
            let opts = NumericOptions {
                tolerance: *tolerance,
                max_iter: *max_iter,
                seed: *seed,
                starts: *starts,
            };
            let report = numeric(&space, &opts, !no_oracle, *grid_density)?;
            Ok((
                EXIT_OK,
                if json {
                    to_json(&report)
                } else {
                    numeric_text(&report)
                },
            ))
        }
        Command::Models { check } => {
            let report = models();
            let code = if *check && !report.pass {
                EXIT_MODEL_CHECK
            } else {
                EXIT_OK
            };
            Ok((
                code,
                if json {
                    to_json(&report)
                } else {
                    models_text(&report, *check)
                },
            ))
        }
        Command::Batch { file, certificate } => {
            let text = read(file)?;
            let report = batch(&text);
            let code = report
                .results
                .iter()
                .filter_map(|item| item.error.as_ref())
                .map(|e| {
                    if e.kind == "internal" {
                        EXIT_INTERNAL
                    } else {
                        EXIT_INPUT
                    }
                })
                .max()
                .unwrap_or(EXIT_OK);
            Ok((
                code,
                if json {
                    to_json(&report)
                } else {
                    batch_text(&text, &report, *certificate)
                },
            ))
        }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| {
        Failure::new(
            EXIT_INPUT,
            "input",
            format!("cannot read {}: {e}", path.display()),
        )
    })
}

fn homeo(left: &str, right: &str) -> Result<HomeoReport> {
    let (a, b) = (parse_expr(left)?, parse_expr(right)?);
    let answer = homeomorphic(&a, &b)?;
    let kind = |m: &Manifold| -> Result<_> {
        let r = invariants(m)?;
        Ok(freedman_class(m, &r).ok())
    };
    Ok(HomeoReport {
        schema_version: SCHEMA_VERSION,
        left: a.to_string(),
        right: b.to_string(),
        homeomorphic: answer,
        left_type: kind(&a)?,
        right_type: kind(&b)?,
    })
}

fn numeric(
    space: &QuadraticFormSpace,
    opts: &NumericOptions,
    oracle: bool,
    grid: usize,
) -> Result<NumericReport> {
    let result = alpha_squared_numeric::<f64>(space, opts)?;
    let basis = result.witness.basis();
    let witness = (0..basis.cols()).map(|j| basis.column(j)).collect();
    let oracle = if oracle && space.dimension() <= MAX_DIMENSION {
        let o = alpha_brute_oracle(space, grid)?;
        Some(OracleReport {
            value: o.value,
            attained: o.attained,
            evaluations: o.evaluations,
        })
    } else {
        None
    };
    Ok(NumericReport {
        schema_version: SCHEMA_VERSION,
        b_plus: space.b_plus(),
        b_minus: space.b_minus(),
        classes: space.classes().len(),
        value: result.value,
        iterations: result.iterations,
        converged: result.converged,
        attained: result.attained,
        witness,
        oracle,
    })
}

fn rational_text<T: ToString>(r: &std::result::Result<T, CurvatureError>) -> Option<String> {
    r.as_ref().ok().map(|v| v.to_string())
}

fn model_row(r: &ModelReport<Rational>) -> ModelRow {
    ModelRow {
        name: r.name.clone(),
        gauss_bonnet_plus: r.gauss_bonnet.as_ref().ok().map(|(p, _)| p.to_string()),
        gauss_bonnet_minus: r.gauss_bonnet.as_ref().ok().map(|(_, m)| m.to_string()),
        kaehler_spectrum: r.kaehler_spectrum,
        weitzenboeck: rational_text(&r.weitzenboeck),
        saturation: r.saturation.as_ref().ok().copied(),
        pass: r.passes(),
    }
}

fn models() -> ModelsReport {
    let models: Vec<ModelRow> = builtin_models::<Rational>()
        .iter()
        .map(|m| model_row(&check_model(m)))
        .collect();
    let pass = models.iter().all(|m| m.pass);
    ModelsReport {
        schema_version: SCHEMA_VERSION,
        models,
        pass,
    }
}

fn batch_item(index: usize, line: &str) -> Option<BatchItem> {
    let input = line.trim();
    if input.is_empty() || input.starts_with('#') {
        return None;
    }
    let outcome = parse_expr(input).and_then(|m| Ok(evaluate(&m)?));
    let (report, error) = match outcome {
        Ok(e) => (Some(EvalReport::from(&e)), None),
        Err(f) => (None, Some(*f.report)),
    };
    Some(BatchItem {
        line: index + 1,
        input: input.to_string(),
        report,
        error,
    })
}

/// Evaluates lines in parallel; results keep input order.
fn batch(text: &str) -> BatchReport {
    let lines: Vec<&str> = text.lines().collect();
    let results = lines
        .par_iter()
        .enumerate()
        .map(|(i, line)| batch_item(i, line))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    BatchReport {
        schema_version: SCHEMA_VERSION,
        results,
    }
}

fn eval_text(e: &Evaluation, certificate: bool) -> String {
    let r = &e.record;
    let mut out = String::new();
    let _ = writeln!(out, "{}", e.manifold);
    let _ = writeln!(
        out,
        "  chi = {}, tau = {}, b+ = {}, b- = {}, spin = {}",
        r.chi, r.tau, r.b_plus, r.b_minus, r.spin
    );
    let _ = writeln!(
        out,
        "  alpha^2: {} [{}]",
        e.alpha.status,
        e.alpha.rule.label()
    );
    let _ = writeln!(out, "  verdict: {}", e.verdict.conclusion);
    if certificate {
        out.push_str("certificate:\n");
        for line in &e.verdict.certificate {
            let _ = writeln!(out, "  {line}");
        }
    }
    out
}

fn tri_opt<T: std::fmt::Display>(v: &Option<T>) -> String {
    v.as_ref().map_or("unknown".to_string(), |x| x.to_string())
}

fn invariants_text(r: &InvariantsReport) -> String {
    let rec = &r.record;
    let mut out = format!("{}\n", r.expr);
    let _ = writeln!(out, "  chi              {}", rec.chi);
    let _ = writeln!(out, "  tau              {}", rec.tau);
    let _ = writeln!(out, "  b+               {}", rec.b_plus);
    let _ = writeln!(out, "  b-               {}", rec.b_minus);
    let _ = writeln!(out, "  b1               {}", tri_opt(&rec.b1));
    let _ = writeln!(out, "  spin             {}", rec.spin);
    let _ = writeln!(out, "  simply connected {}", rec.simply_connected);
    let _ = writeln!(out, "  psc              {}", rec.psc);
    let _ = writeln!(out, "  scalar flat      {}", rec.scalar_flat);
    if let Some(c) = &rec.complex {
        let _ = writeln!(out, "  c1^2             {}", c.c1sq);
        let _ = writeln!(out, "  c1^2 minimal     {}", tri_opt(&c.c1sq_minimal_model));
        let _ = writeln!(out, "  chi_h            {}", c.chi_h);
        let _ = writeln!(out, "  minimal          {}", c.minimal);
        let _ = writeln!(out, "  ample K          {}", c.ample_k);
    }
    out
}

fn homeo_text(r: &HomeoReport) -> String {
    let mut out = format!("{}\n", r.homeomorphic);
    for (expr, kind) in [(&r.left, &r.left_type), (&r.right, &r.right_type)] {
        match kind {
            Some(h) => {
                let _ = write!(
                    out,
                    "  {expr}: (chi, tau, parity) = ({}, {}, {})",
                    h.chi, h.tau, h.parity
                );
                match &h.canonical {
                    Some(c) => {
                        let _ = writeln!(out, ", homeomorphic to {c}");
                    }
                    None => out.push_str(", no catalog representative\n"),
                }
            }
            None => {
                let _ = writeln!(
                    out,
                    "  {expr}: not classified (not known simply connected or parity unknown)"
                );
            }
        }
    }
    out
}

fn alpha_text(r: &AlphaExprReport, status: &str) -> String {
    let mut out = format!("{}\n  alpha^2: {status}\n", r.expr);
    for line in &r.alpha_sq.trace {
        let _ = writeln!(out, "  {line}");
    }
    out
}

fn numeric_text(r: &NumericReport) -> String {
    let mut out = format!(
        "form: b+ = {}, b- = {}, {} classes\nalpha^2 = {:.10}\n  iterations {}, converged {}, attained {}\n",
        r.b_plus, r.b_minus, r.classes, r.value, r.iterations, r.converged, r.attained
    );
    if let Some(o) = &r.oracle {
        let _ = writeln!(
            out,
            "brute force: {:.10} (attained {}, {} evaluations)",
            o.value, o.attained, o.evaluations
        );
    }
    out
}

fn models_text(r: &ModelsReport, check: bool) -> String {
    let cell = |v: &Option<String>| v.clone().unwrap_or_else(|| "n/a".into());
    let flag = |v: Option<bool>| v.map_or("n/a".to_string(), |b| b.to_string());
    let mut out = format!(
        "{:<7} {:>6} {:>6} {:>8} {:>6} {:>10}{}\n",
        "model",
        "GB+",
        "GB-",
        "kaehler",
        "weitz",
        "saturation",
        if check { "  result" } else { "" }
    );
    for m in &r.models {
        let _ = write!(
            out,
            "{:<7} {:>6} {:>6} {:>8} {:>6} {:>10}",
            m.name,
            cell(&m.gauss_bonnet_plus),
            cell(&m.gauss_bonnet_minus),
            flag(m.kaehler_spectrum),
            cell(&m.weitzenboeck),
            flag(m.saturation)
        );
        if check {
            out.push_str(if m.pass { "  ok" } else { "  FAIL" });
        }
        out.push('\n');
    }
    if check {
        out.push_str(if r.pass {
            "all checks passed\n"
        } else {
            "some checks failed\n"
        });
    }
    out
}

fn batch_text(_text: &str, r: &BatchReport, certificate: bool) -> String {
    let mut out = String::new();
    for item in &r.results {
        match (&item.report, &item.error) {
            (Some(rep), _) => {
                let tag = rep
                    .tag
                    .as_deref()
                    .map(|t| format!("({t})"))
                    .unwrap_or_default();
                let _ = writeln!(
                    out,
                    "{}\t{}{}\t{}",
                    item.line, rep.conclusion, tag, rep.expr
                );
                if certificate {
                    for line in &rep.certificate {
                        let _ = writeln!(out, "\t{line}");
                    }
                }
            }
            (None, Some(err)) => {
                let _ = writeln!(out, "{}\terror\t{}: {}", item.line, item.input, err.message);
            }
            (None, None) => unreachable!("batch items carry a report or an error"),
        }
    }
    out
}
