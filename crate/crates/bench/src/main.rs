use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use nsopt::problems::{problem_by_name, CATALOG};
use nsopt_bench::report::{final_gap_summary, lines_from_reproduction, lines_from_rows};
use nsopt_bench::tables::published_table;
use nsopt_bench::{
    emit_report, reproduce_table, run_experiment, BenchError, ExperimentConfig, Format, Method,
    Result, Table,
};

#[derive(Parser)]
#[command(
    name = "nsopt",
    version,
    about = "Nonsmooth convex minimization benchmarks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one method on one problem.
    Solve(SolveArgs),
    /// Reproduce a published comparison table on the Shor problem.
    Reproduce {
        /// table1 or table2
        table: String,
        #[arg(long, default_value = "markdown")]
        format: String,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List problems and methods.
    List,
}

#[derive(clap::Args)]
struct SolveArgs {
    /// TOML experiment config; flags below override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    problem: Option<String>,
    #[arg(long)]
    method: Option<String>,
    /// Target accuracies, comma separated or repeated.
    #[arg(long, value_delimiter = ',')]
    eps: Vec<f64>,
    #[arg(long)]
    max_evals: Option<u64>,
    /// Starting point, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    x0: Option<Vec<f64>>,
    /// JSON-lines trace output.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Method parameter, `key=value`; repeatable.
    #[arg(long = "param", value_name = "KEY=VALUE")]
    params: Vec<String>,
    #[arg(long, default_value = "markdown")]
    format: String,
}

const DEFAULT_MAX_EVALS: u64 = 10_000;

fn build_config(args: SolveArgs) -> Result<ExperimentConfig> {
    let mut config = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|source| BenchError::Io {
                path: path.clone(),
                source,
            })?;
            ExperimentConfig::from_toml(&text)?
        }
        None => ExperimentConfig {
            problem: args
                .problem
                .clone()
                .ok_or_else(|| BenchError::usage("--problem is required without --config"))?,
            method: args
                .method
                .clone()
                .ok_or_else(|| BenchError::usage("--method is required without --config"))?,
            params: Default::default(),
            x0: None,
            eps: Vec::new(),
            max_evals: DEFAULT_MAX_EVALS,
            stop_at_target: true,
            trace: None,
        },
    };
    if let Some(p) = args.problem {
        config.problem = p;
    }
    if let Some(m) = args.method {
        config.method = m;
    }
    if !args.eps.is_empty() {
        config.eps = args.eps;
    }
    if let Some(n) = args.max_evals {
        config.max_evals = n;
    }
    if let Some(x0) = args.x0 {
        config.x0 = Some(x0);
    }
    if let Some(t) = args.trace {
        config.trace = Some(t);
    }
    for kv in &args.params {
        let (key, value) = kv
            .split_once('=')
            .ok_or_else(|| BenchError::usage(format!("--param expects key=value, got {kv:?}")))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| BenchError::usage(format!("--param {key}: not a number")))?;
        config.params.insert(key.trim().to_string(), value);
    }
    Ok(config)
}

/// Exit code 1 when some target was not reached.
fn solve(args: SolveArgs) -> Result<ExitCode> {
    let format: Format = args.format.parse()?;
    let config = build_config(args)?;
    let run = run_experiment(&config)?;
    if !run.row.entries.is_empty() {
        print!(
            "{}",
            emit_report(&lines_from_rows(std::slice::from_ref(&run.row)), format)?
        );
    }
    println!(
        "best value {} after {} evaluations ({:?})",
        run.result.best_value, run.result.total_evals, run.result.termination
    );
    if let Some(gap) = run.final_gap {
        println!("final gap {gap:e}");
    }
    Ok(if run.all_reached() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn reproduce(table: &str, format: &str, out: Option<PathBuf>) -> Result<ExitCode> {
    let table: Table = table.parse()?;
    let format: Format = format.parse()?;
    let rows = reproduce_table(table)?;
    let mut text = emit_report(&lines_from_reproduction(&rows), format)?;
    if format == Format::Markdown {
        text.push_str("\nFinal gaps:\n\n");
        text.push_str(&final_gap_summary(&rows));
        text.push_str("\nPublished table:\n\n");
        text.push_str(published_table(table));
    }
    match out {
        Some(path) => fs::write(&path, text).map_err(|source| BenchError::Io { path, source })?,
        None => print!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn list() -> Result<ExitCode> {
    println!("problems:");
    for name in CATALOG {
        let p = problem_by_name(name)?;
        let f_star = p.f_star.map_or("unknown".to_string(), |f| f.to_string());
        println!("  {:<10} n={} f*={}", name, p.dimension(), f_star);
    }
    println!("methods:");
    for m in Method::ALL {
        println!(
            "  {:<6} {} [{}]",
            m.name(),
            m.describe(),
            m.param_keys().join(", ")
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Solve(args) => solve(args),
        Command::Reproduce { table, format, out } => reproduce(&table, &format, out),
        Command::List => list(),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_usage() {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
