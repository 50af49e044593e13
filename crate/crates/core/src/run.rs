//! Stopping rules, per-iteration trace rows and run results.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::CountingOracle;
use crate::vector::DenseVector;

/// What happened in an iteration.
///
/// A function value or distance restart ends the iteration and takes
/// precedence; otherwise a norm restart at the start of the iteration is
/// reported, then the outcome of the descent test. Baseline methods always
/// report `None`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Event {
    None,
    Norm,
    FunctionValue,
    Distance,
    Descent,
    NonDescent,
}

/// Extra bookkeeping recorded by the conjugate subgradient engine.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CsgStep {
    /// `f(y^{k+1})` at the trial point.
    pub f_trial: f64,
    /// Path length `b` after the trial step, before any reset.
    pub b: f64,
    /// Distance budget `d_t` the path length was compared against.
    #[serde(with = "extended_real")]
    pub d: f64,
    /// Norm threshold `η_t` in force for the step.
    #[serde(with = "extended_real")]
    pub eta: f64,
    /// `⟨g^{k+1}, p^k⟩`.
    pub g_dot_p: f64,
    pub norm_restart: bool,
    pub descent: bool,
    /// Counters after the iteration.
    pub l: u64,
    pub m: u64,
    pub s: u64,
    pub t: u64,
}

/// One trace row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub k: u64,
    /// Objective value at the iterate the step started from.
    pub f_x: f64,
    /// Record value `φ` after the iteration.
    pub phi: f64,
    /// Norm of the direction the step moved along.
    pub p_norm: f64,
    /// Step size used.
    pub lambda: f64,
    pub event: Event,
    /// Cumulative oracle calls after the iteration.
    pub eval_count: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csg: Option<CsgStep>,
}

/// Why a run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Termination {
    /// The record gap `φ − f*` reached the target accuracy.
    TargetReached,
    /// The oracle call budget ran out.
    BudgetExhausted,
}

/// The methods never terminate on their own; runs stop on the first of a
/// gap target (when `f*` is known) or an evaluation budget.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StoppingRule {
    pub max_evals: u64,
    pub target: Option<GapTarget>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapTarget {
    pub f_star: f64,
    pub eps: f64,
}

impl StoppingRule {
    pub fn budget(max_evals: u64) -> Self {
        Self {
            max_evals,
            target: None,
        }
    }

    pub fn gap(f_star: f64, eps: f64, max_evals: u64) -> Self {
        Self {
            max_evals,
            target: Some(GapTarget { f_star, eps }),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_evals == 0 {
            return Err(Error::InvalidParameter("max_evals must be >= 1".into()));
        }
        if let Some(t) = self.target {
            if !(t.eps > 0.0 && t.f_star.is_finite()) {
                return Err(Error::InvalidParameter(format!("bad gap target {t:?}")));
            }
        }
        Ok(())
    }

    pub fn check(&self, oracle: &CountingOracle<'_>, start_evals: u64) -> Option<Termination> {
        if let Some(t) = self.target {
            if oracle.record() - t.f_star <= t.eps {
                return Some(Termination::TargetReached);
            }
        }
        if oracle.eval_count() - start_evals >= self.max_evals {
            return Some(Termination::BudgetExhausted);
        }
        None
    }
}

/// Trace retention policy. `cap = None` keeps every row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct TraceOptions {
    pub enabled: bool,
    pub cap: Option<usize>,
}

impl TraceOptions {
    pub fn all() -> Self {
        Self {
            enabled: true,
            cap: None,
        }
    }

    pub fn off() -> Self {
        Self::default()
    }
}

#[derive(Debug, Clone, Default)]
pub(crate) struct TraceLog {
    rows: Vec<IterationRecord>,
    options: TraceOptions,
    truncated: bool,
}

impl TraceLog {
    pub(crate) fn new(options: TraceOptions) -> Self {
        Self {
            rows: Vec::new(),
            options,
            truncated: false,
        }
    }

    pub(crate) fn push(&mut self, row: impl FnOnce() -> IterationRecord) {
        if !self.options.enabled {
            return;
        }
        if self.options.cap.is_some_and(|cap| self.rows.len() >= cap) {
            self.truncated = true;
            return;
        }
        self.rows.push(row());
    }
}

/// Outcome of a solver run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    /// Best iterate found (the record point).
    pub best_point: DenseVector,
    pub best_value: f64,
    /// Oracle calls made by this run.
    pub total_evals: u64,
    pub termination: Termination,
    pub trace: Vec<IterationRecord>,
    /// Rows were dropped because the trace cap was reached.
    pub trace_truncated: bool,
}

impl RunResult {
    pub(crate) fn finish(
        best_point: DenseVector,
        best_value: f64,
        total_evals: u64,
        termination: Termination,
        log: TraceLog,
    ) -> Self {
        Self {
            best_point,
            best_value,
            total_evals,
            termination,
            trace: log.rows,
            trace_truncated: log.truncated,
        }
    }
}

/// Serializes `±inf` as the strings `"inf"`/`"-inf"` so thresholds that are
/// switched off survive formats without infinities.
mod extended_real {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Finite(f64),
        Text(String),
    }

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        match *v {
            f64::INFINITY => Repr::Text("inf".into()).serialize(s),
            f64::NEG_INFINITY => Repr::Text("-inf".into()).serialize(s),
            x => Repr::Finite(x).serialize(s),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Finite(x) => Ok(x),
            Repr::Text(t) if t == "inf" => Ok(f64::INFINITY),
            Repr::Text(t) if t == "-inf" => Ok(f64::NEG_INFINITY),
            Repr::Text(other) => Err(serde::de::Error::custom(format!(
                "expected a number or \"inf\", got {other:?}"
            ))),
        }
    }
}
