//! Single experiment runs: config, first-hit accounting and trace output.

use std::collections::BTreeMap;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use nsopt::problems::{problem_by_name, ProblemSpec};
use nsopt::solvers::RunOptions;
use nsopt::{
    CountingOracle, DenseVector, GapLadder, IterationRecord, RunResult, StoppingRule, TraceOptions,
};

use crate::error::{BenchError, Result};
use crate::methods::{run_method, Method};

/// One run of one method on one problem.
///
/// Deserializes from a flat TOML document:
///
/// ```toml
/// problem = "shor"
/// method = "csgi"
/// eps = [0.1, 0.01, 0.001]
/// max_evals = 10000
/// # x0 = [0.0, 0.0, 0.0, 0.0, 1.0]
/// # trace = "csgi.jsonl"
///
/// [params]
/// theta = 0.3
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub problem: String,
    pub method: String,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    #[serde(default)]
    pub x0: Option<Vec<f64>>,
    /// Target accuracies for the gap `φ − f*`, strictly decreasing.
    #[serde(default)]
    pub eps: Vec<f64>,
    pub max_evals: u64,
    /// Stop once the last ε is reached. When false the run always uses the
    /// whole budget.
    #[serde(default = "default_true")]
    pub stop_at_target: bool,
    #[serde(default)]
    pub trace: Option<PathBuf>,
}

fn default_true() -> bool {
    true
}

impl ExperimentConfig {
    pub fn new(problem: &str, method: Method, eps: Vec<f64>, max_evals: u64) -> Self {
        Self {
            problem: problem.into(),
            method: method.name().into(),
            params: BTreeMap::new(),
            x0: None,
            eps,
            max_evals,
            stop_at_target: true,
            trace: None,
        }
    }

    pub fn with_param(mut self, key: &str, value: f64) -> Self {
        self.params.insert(key.into(), value);
        self
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        Ok(toml::from_str(text)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_evals < 1 {
            return Err(BenchError::usage("max_evals must be >= 1"));
        }
        if self.eps.iter().any(|e| !(*e > 0.0 && e.is_finite())) {
            return Err(BenchError::usage("eps entries must be positive"));
        }
        if self.eps.windows(2).any(|w| w[1] >= w[0]) {
            return Err(BenchError::usage("eps ladder must be strictly decreasing"));
        }
        Ok(())
    }
}

/// First-hit entry of a table row. `it = None` renders as `-`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TableEntry {
    pub eps: f64,
    pub it: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub method: String,
    pub entries: Vec<TableEntry>,
}

/// Everything a run produced.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub row: TableRow,
    pub result: RunResult,
    /// `φ − f*` at the end of the run, when `f*` is known.
    pub final_gap: Option<f64>,
}

impl Experiment {
    pub fn all_reached(&self) -> bool {
        self.row.entries.iter().all(|e| e.it.is_some())
    }
}

/// Runs a config once, recording for each ε the first cumulative oracle
/// call count at which `φ − f* ≤ ε`. Entries still open when the budget
/// runs out are marked not reached. Writes the trace when the config names
/// a path.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Experiment> {
    config.validate()?;
    let method: Method = config.method.parse()?;
    let problem = problem_by_name(&config.problem)?;
    let x0 = start_point(config, &problem)?;
    if !config.eps.is_empty() && problem.f_star.is_none() {
        return Err(BenchError::usage(format!(
            "problem {} has no known optimum; eps targets need one",
            problem.name
        )));
    }

    let stop = match (problem.f_star, config.eps.last()) {
        (Some(f_star), Some(&eps)) if config.stop_at_target => {
            StoppingRule::gap(f_star, eps, config.max_evals)
        }
        _ => StoppingRule::budget(config.max_evals),
    };
    let mut options = RunOptions::new(stop);
    if config.trace.is_some() {
        options.trace = TraceOptions::all();
    }

    let objective = problem.objective.as_ref();
    let mut oracle = match problem.f_star {
        Some(f_star) => {
            CountingOracle::with_ladder(objective, GapLadder::new(f_star, config.eps.clone()))
        }
        None => CountingOracle::new(objective),
    };
    let result = run_method(method, &problem, &x0, &config.params, &mut oracle, &options)?;
    let hits = oracle
        .ladder()
        .map(|l| l.hits().to_vec())
        .unwrap_or_default();
    let entries = config
        .eps
        .iter()
        .zip(hits)
        .map(|(&eps, it)| TableEntry { eps, it })
        .collect();

    if let Some(path) = &config.trace {
        write_trace(&result.trace, path)?;
    }
    Ok(Experiment {
        row: TableRow {
            method: method.name().into(),
            entries,
        },
        final_gap: problem.f_star.map(|f| result.best_value - f),
        result,
    })
}

fn start_point(config: &ExperimentConfig, problem: &ProblemSpec) -> Result<DenseVector> {
    match &config.x0 {
        None => Ok(problem.x0_default.clone()),
        Some(coords) => {
            if coords.len() != problem.dimension() {
                return Err(BenchError::usage(format!(
                    "x0 has {} coordinates, {} expects {}",
                    coords.len(),
                    problem.name,
                    problem.dimension()
                )));
            }
            Ok(DenseVector::new(coords.clone())?)
        }
    }
}

/// One JSON document per line with the record fields in declaration order.
pub fn write_trace(trace: &[IterationRecord], path: &Path) -> Result<()> {
    let io_err = |source| BenchError::Io {
        path: path.to_path_buf(),
        source,
    };
    let file = fs::File::create(path).map_err(io_err)?;
    let mut out = BufWriter::new(file);
    for row in trace {
        let line = serde_json::to_string(row).expect("trace rows serialize");
        writeln!(out, "{line}").map_err(io_err)?;
    }
    out.flush().map_err(io_err)
}

/// Inverse of [`write_trace`].
pub fn read_trace(path: &Path) -> Result<Vec<IterationRecord>> {
    let text = fs::read_to_string(path).map_err(|source| BenchError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    text.lines()
        .map(|line| {
            serde_json::from_str(line).map_err(|e| BenchError::usage(format!("trace line: {e}")))
        })
        .collect()
}
