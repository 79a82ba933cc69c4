//! Command-line harness: model listing, verification runs with JSON and
//! markdown reports, and cubic-form export.
//!
//! Exit codes: 0 when every executed check passes, 1 when any check fails
//! (or an evaluation breaks down mid-run), 2 for usage and configuration
//! errors such as unknown models, unknown suites, malformed flags, or an
//! export mode a model does not support.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use isogeo::numkit::StepPolicy;
use isogeo::report::Report;
use isogeo::runner::{export_alpha, list_models, run_verify, RunConfig, Suite};
use isogeo::IsoError;

#[derive(Parser)]
#[command(
    name = "isogeo",
    version,
    about = "Verification harness for the structural identities of isoparametric hypersurfaces in round spheres"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List registered models (builtin plus any in ISOGEO_MODEL_DIR)
    ListModels,
    /// Run verification suites against one model and report residuals
    Verify(VerifyArgs),
    /// Export the nonzero cubic-form components of a model as JSON
    ExportAlpha(ExportArgs),
}

#[derive(clap::Args)]
struct VerifyArgs {
    /// Model name (see `isogeo list-models`)
    #[arg(long)]
    model: String,
    /// Comma-separated suites; defaults to all of
    /// self,lift,invariants,weyl,codazzi-gauss,symmetry,cartan,homog6
    #[arg(long, value_delimiter = ',', value_parser = parse_suite)]
    suites: Option<Vec<Suite>>,
    /// Number of surface points sampled for point-geometry suites
    #[arg(long, default_value_t = 4)]
    points: usize,
    /// Seed for point sampling and coefficient draws
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Per-check tolerance override, e.g. --tol weyl/invariant=1e-5 (repeatable)
    #[arg(long = "tol", value_name = "NAME=VALUE", value_parser = parse_tol)]
    tol: Vec<(String, f64)>,
    /// Base step for first-derivative measurements
    #[arg(long)]
    fd_step: Option<f64>,
    /// Write the JSON report here, plus a markdown rendering with the
    /// extension replaced by `.md`
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct ExportArgs {
    /// Model name (see `isogeo list-models`)
    #[arg(long)]
    model: String,
    /// Measure at a sampled surface point instead of reading a table
    #[arg(long)]
    point: bool,
    /// Seed for the sampled point
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Base step for first-derivative measurements
    #[arg(long)]
    fd_step: Option<f64>,
    /// Write the JSON dump here instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    Suite::parse(s).map_err(|e| e.to_string())
}

fn parse_tol(s: &str) -> Result<(String, f64), String> {
    let (name, value) = s
        .split_once('=')
        .ok_or_else(|| format!("expected <check-name>=<value>, got '{s}'"))?;
    let tol: f64 = value
        .parse()
        .map_err(|e| format!("invalid tolerance '{value}': {e}"))?;
    Ok((name.to_string(), tol))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

/// Usage and configuration problems exit 2; runs that cannot produce a
/// verdict because the evaluation itself broke down exit 1.
fn exit_code(e: &IsoError) -> u8 {
    match e {
        IsoError::UnknownModel { .. }
        | IsoError::Parse { .. }
        | IsoError::NotApplicable { .. }
        | IsoError::Config(_)
        | IsoError::Io { .. }
        | IsoError::Json { .. } => 2,
        _ => 1,
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode, IsoError> {
    match cli.command {
        Command::ListModels => {
            print_model_table()?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify(args) => verify(args),
        Command::ExportAlpha(args) => export(args),
    }
}

fn print_model_table() -> Result<(), IsoError> {
    let rows = list_models()?;
    println!(
        "{:<12} {:<10} {:>2} {:>3}  multiplicities",
        "name", "kind", "g", "n"
    );
    for row in rows {
        let mults = row
            .multiplicities
            .iter()
            .map(|m| m.to_string())
            .collect::<Vec<_>>()
            .join(",");
        println!(
            "{:<12} {:<10} {:>2} {:>3}  [{}]",
            row.name, row.kind, row.g, row.n, mults
        );
    }
    Ok(())
}

fn step_policy(fd_step: Option<f64>) -> StepPolicy {
    match fd_step {
        Some(h) => StepPolicy::first_derivative().with_base_step(h),
        None => StepPolicy::first_derivative(),
    }
}

fn verify(args: VerifyArgs) -> Result<ExitCode, IsoError> {
    let mut cfg = RunConfig::new(args.model);
    if let Some(suites) = args.suites {
        cfg.suites = suites;
    }
    cfg.points = args.points;
    cfg.seed = args.seed;
    cfg.fd = step_policy(args.fd_step);
    cfg.out = args.out;
    for (name, tol) in args.tol {
        cfg.tol_overrides.insert(name, tol);
    }

    let report = run_verify(&cfg)?;
    if let Some(path) = &cfg.out {
        write_report(&report, path)?;
    }
    print_summary(&report);
    if report.all_passed() {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(1))
    }
}

fn write_report(report: &Report, path: &PathBuf) -> Result<(), IsoError> {
    std::fs::write(path, report.to_json()? + "\n").map_err(|source| IsoError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let md_path = path.with_extension("md");
    std::fs::write(&md_path, report.to_markdown()?).map_err(|source| IsoError::Io {
        path: md_path.display().to_string(),
        source,
    })
}

fn print_summary(report: &Report) {
    for check in &report.checks {
        let status = if check.pass { "pass" } else { "FAIL" };
        println!(
            "{status}  {:<44} {:>12.3e}  (tol {:.1e})",
            check.name, check.value, check.tol
        );
        for w in &check.warnings {
            println!("      warning: {w}");
        }
    }
    for s in &report.skipped {
        println!("skip  {:<44} {}", s.name, s.reason);
    }
    println!(
        "{} passed, {} failed, {} warnings",
        report.summary.passed, report.summary.failed, report.summary.warnings
    );
}

fn export(args: ExportArgs) -> Result<ExitCode, IsoError> {
    let dump = export_alpha(
        &args.model,
        args.point,
        args.seed,
        &step_policy(args.fd_step),
    )?;
    let json = serde_json::to_string_pretty(&dump).map_err(|source| IsoError::Json {
        what: "component export".into(),
        source,
    })?;
    match &args.out {
        Some(path) => std::fs::write(path, json + "\n").map_err(|source| IsoError::Io {
            path: path.display().to_string(),
            source,
        })?,
        None => println!("{json}"),
    }
    Ok(ExitCode::SUCCESS)
}
