use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use heun_cli::scan::{scan, taxonomy, taxonomy_csv};
use heun_cli::{run::run, CliError, JobSpec, RunMode};
use heun_core::exec::Execution;

#[derive(Parser)]
#[command(name = "heun", version, about = "Algebraize, classify and solve Heun-class equations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Algebraization, solvability and representation classes, no solving.
    Analyze(JobArgs),
    /// Everything `analyze` does plus the verified quasi-polynomial solutions.
    Solve(JobArgs),
    /// Classify every point of the job's parameter grid.
    Scan(JobArgs),
    /// Representation classes for given Casimir values.
    Taxonomy(TaxonomyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct JobArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: Option<PathBuf>,
    /// Largest level N to enumerate (overrides the job file).
    #[arg(long)]
    nmax: Option<usize>,
    /// Verification threshold for both the operator residual and the series tail.
    #[arg(long)]
    tol: Option<f64>,
    /// Seed for the eigenvalue root finder (overrides the job file).
    #[arg(long)]
    seed: Option<u64>,
    /// Defaults to json for analyze/solve and csv for scan.
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args)]
struct TaxonomyArgs {
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    casimir: Vec<f64>,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

fn load(args: &JobArgs) -> Result<JobSpec, CliError> {
    let mut job = JobSpec::from_path(&args.input)?;
    if let Some(n) = args.nmax {
        job.nmax = n;
    }
    if let Some(s) = args.seed {
        job.seed = s;
    }
    if let Some(t) = args.tol {
        if !(t.is_finite() && t > 0.0) {
            return Err(CliError::Invalid(format!("--tol must be positive, got {t}")));
        }
        job.tolerances.residual = t;
        job.tolerances.truncation = t;
    }
    Ok(job)
}

fn json<T: serde::Serialize>(v: &T) -> Result<String, CliError> {
    serde_json::to_string_pretty(v).map_err(|e| CliError::Output(e.to_string()))
}

fn emit(output: Option<&Path>, text: &str) -> Result<(), CliError> {
    match output {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Write { path: path.to_path_buf(), source }),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Write { path: "<stdout>".into(), source }),
    }
}

/// Returns whether the run hit numerical failures.
fn execute(cli: Cli) -> Result<bool, CliError> {
    let (mode, args) = match cli.command {
        Command::Analyze(args) => (RunMode::Analyze, args),
        Command::Solve(args) => (RunMode::Solve, args),
        Command::Scan(args) => {
            let job = load(&args)?;
            let table = scan(&job, Execution::Parallel)?;
            let text = match args.format.unwrap_or(Format::Csv) {
                Format::Csv => table.to_csv()?,
                Format::Json => json(&table)?,
            };
            emit(args.output.as_deref(), &text)?;
            return Ok(false);
        }
        Command::Taxonomy(args) => {
            let rows = taxonomy(&args.casimir);
            let text = match args.format {
                Format::Csv => taxonomy_csv(&rows)?,
                Format::Json => json(&rows)?,
            };
            emit(args.output.as_deref(), &text)?;
            return Ok(false);
        }
    };
    let job = load(&args)?;
    let report = run(&job, mode)?;
    let text = match args.format.unwrap_or(Format::Json) {
        Format::Json => report.to_json()?,
        Format::Csv => report.solutions_csv()?,
    };
    emit(args.output.as_deref(), &text)?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    for f in &report.failures {
        eprintln!("failure: {f}");
    }
    Ok(!report.failures.is_empty())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(3),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
