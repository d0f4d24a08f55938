mod analysis;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;
use twf_core::codes::{CodeSpec, DEFAULT_ENUMERATION_BUDGET};
use twf_core::defining_sets::build;
use twf_core::gf::build_field;
use twf_core::srg::{srg_report, DEFAULT_SRG_VERTEX_BUDGET};
use twf_core::Error;

use analysis::{analyze, default_grid, parse_golden, KindArg, Point, Resolved};

const OK: u8 = 0;
const MISMATCH: u8 = 1;
const USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "twf", version, about = "Two-weight codes from quadratic defining sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a defining set and write it as JSON.
    Construct {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Enumerate a code and compare it against the closed forms.
    Analyze {
        #[command(flatten)]
        code: CodeArgs,
        /// Previous analysis output (or a bare weight distribution) to diff against.
        #[arg(long)]
        golden: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the strongly regular graph of a punctured D0 or D* code.
    Srg {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        d: Option<u64>,
        #[arg(long, value_enum)]
        kind: SrgKind,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the analysis over a grid of parameter points.
    Grid {
        /// JSON array of points; the built-in grid is used when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct CodeArgs {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    m: u32,
    #[arg(long)]
    d: Option<u64>,
    #[arg(long, value_enum)]
    kind: KindArg,
    #[arg(long)]
    lambda: Option<u32>,
    #[arg(long)]
    punctured: bool,
}

impl CodeArgs {
    fn point(&self) -> Point {
        Point {
            p: self.p,
            m: self.m,
            d: self.d,
            kind: self.kind,
            lambda: self.lambda,
            punctured: self.punctured,
        }
    }
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum SrgKind {
    D0,
    Dstar,
}

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(code)
}

fn budget() -> Result<u128, String> {
    match std::env::var("TWF_BUDGET") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| format!("TWF_BUDGET must be a nonnegative integer, got {v:?}")),
        Err(_) => Ok(DEFAULT_ENUMERATION_BUDGET),
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

/// Writes the JSON document to `out`, or to stdout when no path is given.
/// The summary goes to whichever stream the document does not use.
fn emit(out: Option<&Path>, json: &str, summary: &str) -> Result<(), String> {
    match out {
        Some(path) => {
            fs::write(path, json).map_err(|e| format!("{}: {e}", path.display()))?;
            print!("{summary}");
        }
        None => {
            eprint!("{summary}");
            print!("{json}");
        }
    }
    Ok(())
}

fn construct(code: &CodeArgs, out: Option<&Path>) -> ExitCode {
    let r = match code.point().resolve() {
        Ok(r) => r,
        Err(e) => return fail(USAGE, e),
    };
    let field = match build_field(r.p, r.m) {
        Ok(f) => f,
        Err(e) => return fail(USAGE, e),
    };
    let set = match build(&field, r.kind, r.d) {
        Ok(s) => s,
        Err(e) => return fail(USAGE, e),
    };
    let summary = format!("kind={} d={} size={}\n", r.kind, r.d, set.len());
    match emit(out, &to_json(&set.describe()), &summary) {
        Ok(()) => ExitCode::from(OK),
        Err(e) => fail(USAGE, e),
    }
}

fn analyze_cmd(code: &CodeArgs, golden: Option<&Path>, out: Option<&Path>) -> ExitCode {
    let r = match code.point().resolve() {
        Ok(r) => r,
        Err(e) => return fail(USAGE, e),
    };
    let budget = match budget() {
        Ok(b) => b,
        Err(e) => return fail(USAGE, e),
    };
    let golden = match golden {
        Some(path) => match fs::read_to_string(path)
            .map_err(|e| format!("{}: {e}", path.display()))
            .and_then(|t| parse_golden(&t))
        {
            Ok(g) => Some(g),
            Err(e) => return fail(USAGE, e),
        },
        None => None,
    };
    let report = match analyze(&r, budget, golden.as_ref()) {
        Ok(a) => a,
        Err(e) => return fail(USAGE, e),
    };
    if let Err(e) = emit(out, &to_json(&report), &report.summary(&r.label())) {
        return fail(USAGE, e);
    }
    ExitCode::from(if report.all_match { OK } else { MISMATCH })
}

fn srg_cmd(p: u64, m: u32, d: Option<u64>, kind: SrgKind, out: Option<&Path>) -> ExitCode {
    let point = Point {
        p,
        m,
        d,
        kind: match kind {
            SrgKind::D0 => KindArg::D0,
            SrgKind::Dstar => KindArg::Dstar,
        },
        lambda: None,
        punctured: true,
    };
    let r = match point.resolve() {
        Ok(r) => r,
        Err(e) => return fail(USAGE, e),
    };
    let budget = match budget() {
        Ok(b) => b,
        Err(e) => return fail(USAGE, e),
    };
    let field = match build_field(r.p, r.m) {
        Ok(f) => f,
        Err(e) => return fail(USAGE, e),
    };
    let set = match build(&field, r.kind, r.d) {
        Ok(s) => s,
        Err(e) => return fail(USAGE, e),
    };
    let report = match srg_report(&CodeSpec::new(set), budget, DEFAULT_SRG_VERTEX_BUDGET) {
        Ok(rep) => rep,
        Err(e @ Error::UndefinedCase(_)) => return fail(MISMATCH, e),
        Err(e) => return fail(USAGE, e),
    };
    let status = match report.verified {
        Some(true) => "verified",
        Some(false) => "NOT verified",
        None => "predicted only",
    };
    let mut summary = format!(
        "SRG({},{},{},{}) {status}\n",
        report.vertices, report.valency, report.lambda, report.mu
    );
    if let Some(note) = &report.note {
        summary.push_str(&format!("note: {note}\n"));
    }
    if let Err(e) = emit(out, &to_json(&report), &summary) {
        return fail(USAGE, e);
    }
    let ok = report.verified != Some(false) && report.predicted_feasible;
    ExitCode::from(if ok { OK } else { MISMATCH })
}

#[derive(Serialize)]
struct GridRow {
    p: u64,
    m: u32,
    d: String,
    kind: String,
    lambda: String,
    n: String,
    k: String,
    weights: String,
    #[serde(rename = "match")]
    matched: String,
    note: String,
}

enum Outcome {
    Done(Resolved, Box<analysis::Analysis>),
    Skipped(Point, Option<Resolved>, String),
    Invalid(Point, Option<Resolved>, String),
}

fn run_point(point: &Point, budget: u128) -> Outcome {
    let r = match point.resolve() {
        Ok(r) => r,
        Err(e) => return Outcome::Invalid(point.clone(), None, e),
    };
    if r.m < 2 {
        return Outcome::Skipped(point.clone(), Some(r), "theorems require m ≥ 2".into());
    }
    match analyze(&r, budget, None) {
        Ok(a) => Outcome::Done(r, Box::new(a)),
        Err(e) => Outcome::Invalid(point.clone(), Some(r), e.to_string()),
    }
}

fn blank_row(point: &Point, r: Option<&Resolved>, matched: &str, note: String) -> GridRow {
    GridRow {
        p: point.p,
        m: point.m,
        d: r.map(|r| r.d).or(point.d).map(|d| d.to_string()).unwrap_or_default(),
        kind: r.map(|r| r.kind.name().to_string()).unwrap_or_else(|| {
            serde_json::to_value(point.kind)
                .ok()
                .and_then(|v| v.as_str().map(str::to_string))
                .unwrap_or_default()
        }),
        lambda: point.lambda.map(|l| l.to_string()).unwrap_or_default(),
        n: String::new(),
        k: String::new(),
        weights: String::new(),
        matched: matched.into(),
        note,
    }
}

fn grid(config: Option<&Path>, out: &Path) -> ExitCode {
    let points: Vec<Point> = match config {
        Some(path) => {
            let parsed = fs::read_to_string(path)
                .map_err(|e| format!("{}: {e}", path.display()))
                .and_then(|t| serde_json::from_str(&t).map_err(|e| format!("config: {e}")));
            match parsed {
                Ok(p) => p,
                Err(e) => return fail(USAGE, e),
            }
        }
        None => default_grid(),
    };
    if points.is_empty() {
        return fail(USAGE, "grid config lists no points");
    }
    let budget = match budget() {
        Ok(b) => b,
        Err(e) => return fail(USAGE, e),
    };
    if let Err(e) = fs::create_dir_all(out) {
        return fail(USAGE, format!("{}: {e}", out.display()));
    }

    let outcomes: Vec<Outcome> = points.par_iter().map(|pt| run_point(pt, budget)).collect();
    let mut rows = Vec::with_capacity(outcomes.len());
    let mut code = OK;
    for outcome in &outcomes {
        match outcome {
            Outcome::Done(r, a) => {
                let path = out.join(format!("{}.json", r.slug()));
                if let Err(e) = fs::write(&path, to_json(a)) {
                    return fail(USAGE, format!("{}: {e}", path.display()));
                }
                if !a.all_match {
                    code = code.max(MISMATCH);
                }
                rows.push(GridRow {
                    p: r.p,
                    m: r.m,
                    d: r.d.to_string(),
                    kind: r.kind.name().to_string(),
                    lambda: r.kind.lambda().to_string(),
                    n: a.parameters[0].to_string(),
                    k: a.parameters[1].to_string(),
                    weights: a
                        .weight_distribution
                        .counts
                        .iter()
                        .map(|(w, c)| format!("{w}:{c}"))
                        .collect::<Vec<_>>()
                        .join(" "),
                    matched: a.all_match.to_string(),
                    note: a.failures.join("; "),
                });
            }
            Outcome::Skipped(pt, r, reason) => {
                eprintln!("skipped p={} m={}: {reason}", pt.p, pt.m);
                rows.push(blank_row(pt, r.as_ref(), "skipped", reason.clone()));
            }
            Outcome::Invalid(pt, r, reason) => {
                eprintln!("invalid point p={} m={}: {reason}", pt.p, pt.m);
                code = code.max(USAGE);
                rows.push(blank_row(pt, r.as_ref(), "error", reason.clone()));
            }
        }
    }

    let csv_path = out.join("summary.csv");
    let written = csv::Writer::from_path(&csv_path).and_then(|mut w| {
        for row in &rows {
            w.serialize(row)?;
        }
        w.flush()?;
        Ok(())
    });
    if let Err(e) = written {
        return fail(USAGE, format!("{}: {e}", csv_path.display()));
    }
    let matched = rows.iter().filter(|r| r.matched == "true").count();
    println!(
        "{matched}/{} points match; {} written",
        rows.len(),
        csv_path.display()
    );
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match &cli.command {
        Command::Construct { code, out } => construct(code, out.as_deref()),
        Command::Analyze { code, golden, out } => {
            analyze_cmd(code, golden.as_deref(), out.as_deref())
        }
        Command::Srg { p, m, d, kind, out } => srg_cmd(*p, *m, *d, *kind, out.as_deref()),
        Command::Grid { config, out } => grid(config.as_deref(), out),
    }
}
