use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use asga::bench::{run_experiment, ExperimentConfig, OutputFormat, ProblemFamily};
use asga::solvers::Method;

/// Runs a solver-by-problem benchmark grid and writes traces and a summary.
#[derive(Parser, Debug)]
#[command(name = "asga-bench", version)]
struct Cli {
    /// JSON experiment file; flags below override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Solvers to run, e.g. `--solver ASGA-2 --solver FISTA`.
    #[arg(long = "solver", value_parser = parse_method)]
    solvers: Vec<Method>,
    /// l1, elastic-net, elastic-net-box, svm-l1, svm-l22 or svm-l22l1.
    #[arg(long, value_parser = ProblemFamily::parse)]
    problem: Option<ProblemFamily>,
    /// Problem dimension (features for SVM).
    #[arg(long)]
    n: Option<usize>,
    /// Rows of the design matrix (samples for SVM).
    #[arg(long)]
    m: Option<usize>,
    /// Labeled CSV for the SVM families.
    #[arg(long)]
    data: Option<PathBuf>,
    #[arg(long)]
    budget_seconds: Option<f64>,
    #[arg(long)]
    budget_oracle: Option<u64>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_parser = parse_format)]
    format: Option<OutputFormat>,
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: asga::Error| e.to_string())
}

fn parse_format(s: &str) -> Result<OutputFormat, String> {
    match s.to_ascii_lowercase().as_str() {
        "csv" => Ok(OutputFormat::Csv),
        "json" => Ok(OutputFormat::Json),
        _ => Err(format!("unknown format '{s}' (csv or json)")),
    }
}

fn build_config(cli: Cli) -> asga::Result<ExperimentConfig> {
    let mut c = match &cli.config {
        Some(path) => ExperimentConfig::from_json_file(path)?,
        None => ExperimentConfig::default(),
    };
    if !cli.solvers.is_empty() {
        c.solvers = cli.solvers;
    }
    if let Some(f) = cli.problem {
        c.problem.family = f;
    }
    if let Some(n) = cli.n {
        c.problem.n = n;
    }
    if cli.m.is_some() {
        c.problem.m = cli.m;
    }
    if cli.data.is_some() {
        c.problem.data = cli.data;
    }
    if cli.budget_seconds.is_some() {
        c.budget.seconds = cli.budget_seconds;
    }
    if cli.budget_oracle.is_some() {
        c.budget.oracle_calls = cli.budget_oracle;
    }
    if c.budget.seconds.is_none() && c.budget.oracle_calls.is_none() {
        c.budget.seconds = Some(5.0);
    }
    if let Some(e) = cli.eps {
        c.eps = e;
    }
    if let Some(s) = cli.seed {
        c.seed = s;
    }
    if let Some(o) = cli.out {
        c.output = o;
    }
    if let Some(f) = cli.format {
        c.format = f;
    }
    Ok(c)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = match build_config(cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    match run_experiment(&config) {
        Ok(result) => {
            print!("{}", result.summary_table());
            println!("outputs in {}", result.config.output.display());
            if result.any_failed() {
                for c in result.cells.iter().filter(|c| c.error.is_some()) {
                    eprintln!("failed: {} / {}: {}", c.problem, c.solver, c.error.as_deref().unwrap_or(""));
                }
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
