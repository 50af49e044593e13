//! Classical subgradient baselines without line search.
//!
//! All four evaluate exactly one subgradient per iteration, at the current
//! iterate, and are plain affine recursions in the observed subgradients.

use crate::error::{Error, Result};
use crate::oracle::CountingOracle;
use crate::run::{Event, IterationRecord, RunResult, Termination, TraceLog};
use crate::solvers::RunOptions;
use crate::vector::DenseVector;

/// `λ_k = λ / √(k+1)` with `λ = ‖x⁰ − x*‖ / L`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqrtStepRule {
    pub x_star_dist: f64,
    /// Upper bound for subgradient norms.
    pub lipschitz: f64,
}

impl SqrtStepRule {
    pub fn scale(&self) -> f64 {
        self.x_star_dist / self.lipschitz
    }

    pub fn step(&self, k: u64) -> f64 {
        self.scale() / ((k + 1) as f64).sqrt()
    }

    fn validate(&self) -> Result<()> {
        if !(self.x_star_dist > 0.0 && self.lipschitz > 0.0)
            || !self.x_star_dist.is_finite()
            || !self.lipschitz.is_finite()
        {
            return Err(Error::InvalidParameter(format!("bad step rule {self:?}")));
        }
        Ok(())
    }
}

enum Update<'a> {
    /// `x ← x − (λ/(k+1)) g`.
    Harmonic(f64),
    /// `x ← x − λ_k g`.
    Sqrt(&'a SqrtStepRule),
    /// `x ← x⁰ − λ_k Σ gⁱ`.
    DualAveraging(&'a SqrtStepRule),
    /// `y = x⁰ − λ_k Σ gⁱ`, `x ← μ_k x + (1 − μ_k) y`, `μ_k = (k+1)/(k+2)`.
    DoubleAveraging(&'a SqrtStepRule),
}

/// Subgradient method with the divergent series rule `λ_k = λ/(k+1)`.
pub fn run_sgm(
    oracle: &mut CountingOracle<'_>,
    x0: &DenseVector,
    lambda0: f64,
    options: &RunOptions,
) -> Result<RunResult> {
    if !(lambda0 > 0.0 && lambda0.is_finite()) {
        return Err(Error::InvalidParameter(format!("lambda0 {lambda0}")));
    }
    run_affine(oracle, x0, Update::Harmonic(lambda0), options)
}

/// Subgradient method with `λ_k = λ/√(k+1)`.
pub fn run_sgmt(
    oracle: &mut CountingOracle<'_>,
    x0: &DenseVector,
    rule: &SqrtStepRule,
    options: &RunOptions,
) -> Result<RunResult> {
    rule.validate()?;
    run_affine(oracle, x0, Update::Sqrt(rule), options)
}

/// Simple dual averaging: steps from `x⁰` against the running subgradient sum.
pub fn run_asg(
    oracle: &mut CountingOracle<'_>,
    x0: &DenseVector,
    rule: &SqrtStepRule,
    options: &RunOptions,
) -> Result<RunResult> {
    rule.validate()?;
    run_affine(oracle, x0, Update::DualAveraging(rule), options)
}

/// Simple double averaging: the dual averaging point is blended into the
/// iterate with weight `1/(k+2)`.
pub fn run_dasg(
    oracle: &mut CountingOracle<'_>,
    x0: &DenseVector,
    rule: &SqrtStepRule,
    options: &RunOptions,
) -> Result<RunResult> {
    rule.validate()?;
    run_affine(oracle, x0, Update::DoubleAveraging(rule), options)
}

fn run_affine(
    oracle: &mut CountingOracle<'_>,
    x0: &DenseVector,
    update: Update<'_>,
    options: &RunOptions,
) -> Result<RunResult> {
    options.stop.validate()?;
    let start_evals = oracle.eval_count();
    let mut log = TraceLog::new(options.trace);
    let mut x = x0.clone();
    let mut best_point = x0.clone();
    let mut best_value = f64::INFINITY;
    let mut sum = DenseVector::zeros(x0.dim());
    let mut k: u64 = 0;

    let termination: Termination = loop {
        let ev = oracle.evaluate(&x)?;
        if ev.value < best_value {
            best_value = ev.value;
            best_point = x.clone();
        }
        let (next, lambda, p_norm) = match update {
            Update::Harmonic(lambda0) => {
                let lambda = lambda0 / (k + 1) as f64;
                (
                    x.add_scaled(-lambda, &ev.subgradient)?,
                    lambda,
                    ev.subgradient.norm(),
                )
            }
            Update::Sqrt(rule) => {
                let lambda = rule.step(k);
                (
                    x.add_scaled(-lambda, &ev.subgradient)?,
                    lambda,
                    ev.subgradient.norm(),
                )
            }
            Update::DualAveraging(rule) => {
                sum = sum.add_scaled(1.0, &ev.subgradient)?;
                let lambda = rule.step(k);
                (x0.add_scaled(-lambda, &sum)?, lambda, sum.norm())
            }
            Update::DoubleAveraging(rule) => {
                sum = sum.add_scaled(1.0, &ev.subgradient)?;
                let lambda = rule.step(k);
                let y = x0.add_scaled(-lambda, &sum)?;
                let mu = (k + 1) as f64 / (k + 2) as f64;
                let blended = x.scaled(mu).add_scaled(1.0 - mu, &y)?;
                (blended, lambda, sum.norm())
            }
        };
        let eval_count = oracle.eval_count() - start_evals;
        log.push(|| IterationRecord {
            k,
            f_x: ev.value,
            phi: best_value,
            p_norm,
            lambda,
            event: Event::None,
            eval_count,
            csg: None,
        });
        if let Some(reason) = options.stop.check(oracle, start_evals) {
            break reason;
        }
        if !next.is_finite() {
            return Err(Error::NonFinite {
                context: format!("iterate {}", k + 1),
            });
        }
        x = next;
        k += 1;
    };

    Ok(RunResult::finish(
        best_point,
        best_value,
        oracle.eval_count() - start_evals,
        termination,
        log,
    ))
}
