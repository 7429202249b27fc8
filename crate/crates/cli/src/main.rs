//! `polyproj`: build deformed products of polygons, verify their
//! projections to four-space and tabulate flag-vector metrics.
//!
//! Exit codes: 0 success, 1 verification or analysis failure, 2 invalid
//! input.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use polyproj::analysis::{self, Pipeline, SCHEMA};
use polyproj::construction::{
    build_deformed_product, search_parameters, ConstructionParams, SearchStart,
};
use polyproj::metrics::{self, Value};
use polyproj::polytope::io::{self, PolytopeJson, VerticesJson};
use polyproj::polytope::{h_to_v, HPolytope};
use polyproj::rational::{self, Rational};

#[derive(Parser)]
#[command(
    name = "polyproj",
    version,
    about = "Deformed products of polygons and their projections"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the labeled inequality system for (n, r).
    Construct {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        /// `auto` or a rational `p/q`.
        #[arg(long, default_value = "auto")]
        eps: String,
        /// `auto` or a rational `p/q`.
        #[arg(long = "big-m", default_value = "auto")]
        big_m: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = SystemFormat::Json)]
        format: SystemFormat,
        /// Build odd-n systems anyway; all checks still run.
        #[arg(long)]
        force: bool,
    },
    /// Run the product, certificate and preservation checks on a system.
    Verify {
        #[arg(long)]
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compute the flag vector and metrics of the projected polytope.
    Analyze {
        #[arg(long)]
        input: PathBuf,
        /// Also evaluate the uncorrected closed forms and report the discrepancy.
        #[arg(long = "paper-literal")]
        literal: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Tabulate predicted flag vectors and metrics over ranges of n and r.
    Sweep {
        /// List or range, e.g. `4,6,8` or `4..20:2`.
        #[arg(long)]
        n: String,
        #[arg(long)]
        r: String,
        /// Skip all hull computations.
        #[arg(long)]
        formula_only: bool,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
        format: TableFormat,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Convert a system between JSON and cdd text, or write its vertices.
    Export {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        to: ExportFormat,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SystemFormat {
    Json,
    Ine,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExportFormat {
    Json,
    Ine,
    Ext,
    VerticesJson,
}

enum Failure {
    Check(anyhow::Error),
    Invalid(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Invalid(e)
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Construct {
            n,
            r,
            eps,
            big_m,
            output,
            format,
            force,
        } => construct(n, r, &eps, &big_m, output.as_deref(), format, force),
        Command::Verify { input, output } => verify(&input, output.as_deref()),
        Command::Analyze {
            input,
            literal,
            output,
        } => analyze(&input, literal, output.as_deref()),
        Command::Sweep {
            n,
            r,
            formula_only,
            jobs,
            format,
            output,
        } => sweep(&n, &r, formula_only, jobs, format, output.as_deref()),
        Command::Export { input, to, output } => export(&input, to, output.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Invalid(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn emit(output: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match output {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut out = std::io::stdout().lock();
            match out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
                _ => Ok(()),
            }
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> anyhow::Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn parse_param(s: &str) -> anyhow::Result<Option<Rational>> {
    if s == "auto" {
        return Ok(None);
    }
    Ok(Some(rational::parse(s).map_err(|e| anyhow!("{s:?}: {e}"))?))
}

fn load_system(path: &Path) -> anyhow::Result<HPolytope> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let parsed = if text.trim_start().starts_with('{') {
        serde_json::from_str::<PolytopeJson>(&text)
            .map_err(polyproj::Error::from)
            .and_then(|j| j.to_polytope())
    } else {
        io::parse_ine(&text)
    };
    parsed.with_context(|| format!("parsing {}", path.display()))
}

#[derive(Serialize)]
struct ConstructSummary {
    schema: u32,
    n: usize,
    r: usize,
    accepted: bool,
    failure: Option<String>,
    params: serde_json::Value,
    rows: usize,
}

fn construct(
    n: usize,
    r: usize,
    eps: &str,
    big_m: &str,
    output: Option<&Path>,
    format: SystemFormat,
    force: bool,
) -> CmdResult {
    let start = SearchStart {
        eps: parse_param(eps)?,
        big_m: parse_param(big_m)?,
        force,
    };
    ConstructionParams::forced(n, r, rational::int(1), rational::int(2))
        .map_err(|e| Failure::Invalid(e.into()))?;
    let outcome = search_parameters(n, r, &start).map_err(|e| Failure::Invalid(e.into()))?;
    let system = match &outcome.result {
        Ok(c) => c.system.clone(),
        Err(_) => {
            build_deformed_product(&outcome.params).map_err(|e| Failure::Invalid(e.into()))?
        }
    };
    let params = outcome.params.to_json();
    let text = match format {
        SystemFormat::Json => {
            let mut j = PolytopeJson::from_polytope(&system);
            j.params = Some(params.clone());
            to_json(&j)?
        }
        SystemFormat::Ine => io::write_ine(&system),
    };
    emit(output, &text)?;
    let summary = ConstructSummary {
        schema: SCHEMA,
        n,
        r,
        accepted: outcome.result.is_ok(),
        failure: outcome.result.as_ref().err().cloned(),
        params,
        rows: system.num_rows(),
    };
    if output.is_some() {
        emit(None, &to_json(&summary)?)?;
    } else {
        eprint!("{}", to_json(&summary)?);
    }
    match outcome.result {
        Ok(_) => Ok(()),
        Err(reason) => Err(Failure::Check(anyhow!("parameters rejected: {reason}"))),
    }
}

fn verify(input: &Path, output: Option<&Path>) -> CmdResult {
    let system = load_system(input)?;
    analysis::infer_shape(&system).map_err(|e| Failure::Invalid(e.into()))?;
    let report = analysis::verify_system(system);
    emit(output, &to_json(&report)?)?;
    match report.first_failure {
        None => Ok(()),
        Some(f) => Err(Failure::Check(anyhow!("verification failed at {f}"))),
    }
}

fn analyze(input: &Path, literal: bool, output: Option<&Path>) -> CmdResult {
    let system = load_system(input)?;
    analysis::infer_shape(&system).map_err(|e| Failure::Invalid(e.into()))?;
    let pipeline = Pipeline::new(system).map_err(|f| Failure::Check(anyhow!("{f}")))?;
    let report =
        analysis::analyze_pipeline(&pipeline, literal).map_err(|e| Failure::Check(e.into()))?;
    emit(output, &to_json(&report)?)?;
    if report.ok {
        Ok(())
    } else {
        Err(Failure::Check(anyhow!(
            "analysis mismatch: {}",
            report.mismatches.join("; ")
        )))
    }
}

/// Parses `a,b,c`, `lo..hi` (inclusive) or `lo..hi:step`, or a comma list
/// mixing both.
fn parse_list(spec: &str) -> anyhow::Result<Vec<usize>> {
    let mut out = Vec::new();
    for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if let Some((lo, rest)) = part.split_once("..") {
            let rest = rest.strip_prefix('=').unwrap_or(rest);
            let (hi, step) = match rest.split_once(':') {
                Some((hi, step)) => (hi, step.parse::<usize>()?),
                None => (rest, 1),
            };
            if step == 0 {
                bail!("step must be positive in {part:?}");
            }
            let (lo, hi): (usize, usize) = (lo.parse()?, hi.parse()?);
            out.extend((lo..=hi).step_by(step));
        } else {
            out.push(
                part.parse()
                    .with_context(|| format!("bad value {part:?}"))?,
            );
        }
    }
    Ok(out)
}

const GEOMETRY_BUDGET: u32 = 5000;

#[derive(Serialize)]
struct SweepRow {
    n: usize,
    r: usize,
    f0: String,
    f1: String,
    f2: String,
    f3: String,
    f03: String,
    fatness: Value,
    complexity: Value,
    geometric: String,
}

#[derive(Serialize)]
struct SweepTable<'a> {
    schema: u32,
    rows: &'a [SweepRow],
}

fn geometric_check(n: usize, r: usize) -> String {
    let pipeline = match polyproj::construction::choose_parameters(n, r) {
        Ok(c) => match Pipeline::with_vertices(c.system, c.vertices, n, r) {
            Ok(p) => p,
            Err(f) => return format!("fail: {f}"),
        },
        Err(e) => return format!("fail: {e}"),
    };
    let verify = analysis::verify_pipeline(&pipeline);
    if let Some(f) = verify.first_failure {
        return format!("fail: {f}");
    }
    match analysis::analyze_pipeline(&pipeline, false) {
        Ok(a) if a.ok => "pass".to_string(),
        Ok(a) => format!("fail: {}", a.mismatches.join("; ")),
        Err(e) => format!("fail: {e}"),
    }
}

fn within_budget(n: usize, r: usize) -> bool {
    u32::try_from(r)
        .ok()
        .and_then(|r| n.checked_pow(r))
        .is_some_and(|v| v <= GEOMETRY_BUDGET as usize)
}

fn sweep(
    n_spec: &str,
    r_spec: &str,
    formula_only: bool,
    jobs: Option<usize>,
    format: TableFormat,
    output: Option<&Path>,
) -> CmdResult {
    let ns = parse_list(n_spec).context("--n")?;
    let rs = parse_list(r_spec).context("--r")?;
    let mut grid: Vec<(usize, usize)> = ns
        .iter()
        .flat_map(|&n| rs.iter().map(move |&r| (n, r)))
        .collect();
    grid.sort_unstable();
    grid.dedup();
    for &(n, r) in &grid {
        metrics::predicted_flag(n, r)
            .map_err(|e| Failure::Invalid(anyhow!("(n, r) = ({n}, {r}): {e}")))?;
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .map_err(|e| Failure::Invalid(e.into()))?;
    let rows: Vec<anyhow::Result<SweepRow>> = pool.install(|| {
        grid.par_iter()
            .map(|&(n, r)| {
                let f = metrics::predicted_flag(n, r)?;
                let fat = metrics::fatness(&f)?;
                let cx = metrics::complexity(&f)?;
                let geometric = if formula_only || !within_budget(n, r) {
                    "formula-only".to_string()
                } else {
                    geometric_check(n, r)
                };
                Ok(SweepRow {
                    n,
                    r,
                    f0: f.f0.to_string(),
                    f1: f.f1.to_string(),
                    f2: f.f2.to_string(),
                    f3: f.f3.to_string(),
                    f03: f.f03.to_string(),
                    fatness: Value::of(&fat),
                    complexity: Value::of(&cx),
                    geometric,
                })
            })
            .collect()
    });
    let rows = rows.into_iter().collect::<anyhow::Result<Vec<_>>>()?;
    let failed = rows
        .iter()
        .filter(|r| r.geometric.starts_with("fail"))
        .count();
    let text = match format {
        TableFormat::Json => to_json(&SweepTable {
            schema: SCHEMA,
            rows: &rows,
        })?,
        TableFormat::Csv => {
            let mut s = String::from("n,r,f0,f1,f2,f3,f03,fatness,fatness_approx,complexity,complexity_approx,geometric\n");
            for row in &rows {
                s.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{},{},{},\"{}\"\n",
                    row.n,
                    row.r,
                    row.f0,
                    row.f1,
                    row.f2,
                    row.f3,
                    row.f03,
                    row.fatness.exact,
                    row.fatness.approx,
                    row.complexity.exact,
                    row.complexity.approx,
                    row.geometric.replace('"', "'"),
                ));
            }
            s
        }
    };
    emit(output, &text)?;
    if failed > 0 {
        return Err(Failure::Check(anyhow!(
            "{failed} geometric check(s) failed"
        )));
    }
    Ok(())
}

fn export(input: &Path, to: ExportFormat, output: Option<&Path>) -> CmdResult {
    let system = load_system(input)?;
    let text = match to {
        ExportFormat::Json => to_json(&PolytopeJson::from_polytope(&system))?,
        ExportFormat::Ine => io::write_ine(&system),
        ExportFormat::Ext | ExportFormat::VerticesJson => {
            let v = h_to_v(&system).map_err(|e| Failure::Check(e.into()))?;
            match to {
                ExportFormat::Ext => io::write_ext(&v),
                _ => to_json(&VerticesJson::from_vertices(&v))?,
            }
        }
    };
    emit(output, &text)?;
    Ok(())
}
