//! Non-monotone conjugate subgradient engine.
//!
//! One state machine serves both wirings. The direction is the nearest point
//! to the origin of the segment between the previous direction and the new
//! subgradient; steps along it are never line-searched. A step that passes
//! the sufficient-decrease test keeps the step size, a step that fails it
//! shrinks the step size but is still accepted (the method is non-monotone).
//! Three restarts reset the direction to a raw subgradient:
//!
//! * norm restart: the direction became shorter than the threshold `η`;
//! * distance restart: the path length `b` walked since the last restart
//!   exceeds the budget `d`; a new epoch `m` starts with a fresh step seed;
//! * function value restart: the trial value exceeds the level `μ`; the
//!   iterate returns to the record point and a new epoch starts.
//!
//! [`run_csgi`] couples the thresholds to the epoch and norm-restart
//! counters. [`run_csgm`] draws them from free sequences indexed by the
//! threshold counter `t`.

use serde::{Deserialize, Serialize};

use crate::direction::{nr_conv2, ConvexCertificate};
use crate::error::{Error, Result};
use crate::oracle::CountingOracle;
use crate::run::{CsgStep, Event, IterationRecord, RunResult, TraceLog};
use crate::schedules::{validate_theta_mu, CsgiParams, ScheduleSpec};
use crate::solvers::RunOptions;
use crate::vector::DenseVector;

/// Parameters of the uncoupled (CSGM) wiring.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CsgmParams {
    pub theta: f64,
    pub mu: f64,
    pub mu_increment: f64,
    /// Step shrink factors, indexed by `s`.
    pub alpha: ScheduleSpec,
    /// Step seeds, indexed by `m`.
    pub beta: ScheduleSpec,
    /// Norm thresholds, indexed by `t`.
    pub eta: ScheduleSpec,
    /// Distance budgets, indexed by `t`.
    pub distance: ScheduleSpec,
}

impl CsgmParams {
    pub fn validate(&self) -> Result<()> {
        validate_theta_mu(self.theta, self.mu, self.mu_increment)?;
        for spec in [&self.alpha, &self.beta, &self.eta, &self.distance] {
            spec.validate()?;
        }
        if self.alpha.vanishes() && self.alpha.term(0) >= 1.0 {
            return Err(Error::InvalidParameter("alpha must map into (0,1)".into()));
        }
        Ok(())
    }
}

/// Complete engine state at the entry of the norm-restart test.
#[derive(Debug, Clone, PartialEq)]
pub struct CsgState {
    pub k: u64,
    /// Norm restarts (reset by epoch restarts in the coupled wiring).
    pub l: u64,
    /// Restart epoch.
    pub m: u64,
    /// Failed descent tests in the current epoch.
    pub s: u64,
    /// Threshold index.
    pub t: u64,
    /// Path length `Σ λ‖p‖` since the last restart.
    pub b: f64,
    pub x: DenseVector,
    pub f_x: f64,
    /// Record point and value.
    pub u: DenseVector,
    pub f_u: f64,
    pub p: DenseVector,
    /// Subgradient at `x`.
    pub g_last: DenseVector,
    pub lambda: f64,
    pub eta: f64,
    pub d: f64,
    pub mu: f64,
}

/// Snapshot handed to an observer after every iteration.
pub struct StepView<'a> {
    pub state: &'a CsgState,
    /// Present when certificate tracking is on: a convex combination of
    /// subgradients gathered since the last restart that reproduces `p`.
    pub certificate: Option<&'a ConvexCertificate>,
}

#[derive(Clone, Copy)]
enum Wiring<'p> {
    Coupled(&'p CsgiParams),
    Free(&'p CsgmParams),
}

impl Wiring<'_> {
    fn theta(&self) -> f64 {
        match self {
            Wiring::Coupled(p) => p.theta,
            Wiring::Free(p) => p.theta,
        }
    }

    fn mu(&self) -> (f64, f64) {
        match self {
            Wiring::Coupled(p) => (p.mu, p.mu_increment),
            Wiring::Free(p) => (p.mu, p.mu_increment),
        }
    }

    /// `(λ₀, η₀, d₀)`.
    fn initial(&self) -> (f64, f64, f64) {
        match self {
            Wiring::Coupled(p) => (
                p.beta_prime.term(0),
                p.beta_dprime.term(0),
                p.beta_tprime.term(0),
            ),
            Wiring::Free(p) => (p.beta.term(0), p.eta.term(0), p.distance.term(0)),
        }
    }

    /// New `(η, d)` after a norm restart, evaluated before `l` and `t`
    /// increment.
    fn after_norm_restart(&self, l: u64, m: u64, t: u64) -> (f64, f64) {
        match self {
            Wiring::Coupled(p) => {
                let a = p.alpha_dprime.term(idx(l));
                (
                    a * p.beta_dprime.term(idx(m)),
                    a * p.beta_tprime.term(idx(m)),
                )
            }
            Wiring::Free(p) => (p.eta.term(idx(t + 1)), p.distance.term(idx(t + 1))),
        }
    }

    fn after_failed_descent(&self, s: u64, m: u64) -> f64 {
        match self {
            Wiring::Coupled(p) => p.alpha_prime.term(idx(s)) * p.beta_prime.term(idx(m)),
            Wiring::Free(p) => p.alpha.term(idx(s)) * p.beta.term(idx(m)),
        }
    }

    /// New `(λ, η, d)` for epoch `m` and threshold index `t`, both already
    /// incremented.
    fn new_epoch(&self, m: u64, t: u64) -> (f64, f64, f64) {
        match self {
            Wiring::Coupled(p) => (
                p.beta_prime.term(idx(m)),
                p.beta_dprime.term(idx(m)),
                p.beta_tprime.term(idx(m)),
            ),
            Wiring::Free(p) => (
                p.beta.term(idx(m)),
                p.eta.term(idx(t)),
                p.distance.term(idx(t)),
            ),
        }
    }

    fn epoch_resets_l(&self) -> bool {
        matches!(self, Wiring::Coupled(_))
    }
}

fn idx(i: u64) -> usize {
    usize::try_from(i).unwrap_or(usize::MAX)
}

/// Runs the coupled wiring.
pub fn run_csgi(
    oracle: &mut CountingOracle<'_>,
    x0: &DenseVector,
    params: &CsgiParams,
    options: &RunOptions,
) -> Result<RunResult> {
    params.validate()?;
    run_engine(oracle, x0, Wiring::Coupled(params), options, None)
}

/// [`run_csgi`] with a callback after every iteration.
pub fn run_csgi_observed(
    oracle: &mut CountingOracle<'_>,
    x0: &DenseVector,
    params: &CsgiParams,
    options: &RunOptions,
    observer: &mut dyn FnMut(&StepView<'_>),
) -> Result<RunResult> {
    params.validate()?;
    run_engine(oracle, x0, Wiring::Coupled(params), options, Some(observer))
}

/// Runs the uncoupled wiring.
pub fn run_csgm(
    oracle: &mut CountingOracle<'_>,
    x0: &DenseVector,
    params: &CsgmParams,
    options: &RunOptions,
) -> Result<RunResult> {
    params.validate()?;
    run_engine(oracle, x0, Wiring::Free(params), options, None)
}

/// [`run_csgm`] with a callback after every iteration.
pub fn run_csgm_observed(
    oracle: &mut CountingOracle<'_>,
    x0: &DenseVector,
    params: &CsgmParams,
    options: &RunOptions,
    observer: &mut dyn FnMut(&StepView<'_>),
) -> Result<RunResult> {
    params.validate()?;
    run_engine(oracle, x0, Wiring::Free(params), options, Some(observer))
}

fn run_engine(
    oracle: &mut CountingOracle<'_>,
    x0: &DenseVector,
    wiring: Wiring<'_>,
    options: &RunOptions,
    mut observer: Option<&mut dyn FnMut(&StepView<'_>)>,
) -> Result<RunResult> {
    options.stop.validate()?;
    let start_evals = oracle.eval_count();
    let theta = wiring.theta();
    let (mu0, mu_increment) = wiring.mu();
    let mut log = TraceLog::new(options.trace);

    let ev0 = oracle.evaluate(x0)?;
    let (lambda0, eta0, d0) = wiring.initial();
    let mut st = CsgState {
        k: 0,
        l: 0,
        m: 0,
        s: 0,
        t: 0,
        b: 0.0,
        x: x0.clone(),
        f_x: ev0.value,
        u: x0.clone(),
        f_u: ev0.value,
        p: ev0.subgradient.clone(),
        g_last: ev0.subgradient,
        lambda: lambda0,
        eta: eta0,
        d: d0,
        mu: mu0,
    };
    let mut cert = options
        .track_certificate
        .then(|| ConvexCertificate::single(st.g_last.clone(), st.x.clone()));

    let termination = loop {
        if let Some(reason) = options.stop.check(oracle, start_evals) {
            break reason;
        }
        let f_start = st.f_x;

        // Norm restart.
        let norm_restart = st.p.norm() <= st.eta;
        if norm_restart {
            st.p = st.g_last.clone();
            let (eta, d) = wiring.after_norm_restart(st.l, st.m, st.t);
            st.eta = eta;
            st.d = d;
            st.l += 1;
            st.t += 1;
            st.b = 0.0;
            if let Some(c) = &mut cert {
                *c = ConvexCertificate::single(st.g_last.clone(), st.x.clone());
            }
        }

        // Trial step.
        let lambda = st.lambda;
        let eta = st.eta;
        let p_norm = st.p.norm();
        let y = st.x.add_scaled(-lambda, &st.p)?;
        if !y.is_finite() {
            return Err(Error::NonFinite {
                context: format!("trial point at iteration {}", st.k),
            });
        }
        st.b += lambda * p_norm;
        let b_after_step = st.b;
        let trial = oracle.evaluate(&y)?;
        let g_dot_p = trial.subgradient.dot(&st.p)?;
        let descent = trial.value <= st.f_x - theta * lambda * p_norm * p_norm;

        let mut event = if descent {
            Event::Descent
        } else {
            Event::NonDescent
        };
        if !descent {
            st.lambda = wiring.after_failed_descent(st.s, st.m);
            st.s += 1;
        }

        if !descent && trial.value > st.mu {
            // Function value restart: back to the record point.
            let row = |st: &CsgState, eval_count: u64| IterationRecord {
                k: st.k,
                f_x: f_start,
                phi: st.f_u,
                p_norm,
                lambda,
                event: Event::FunctionValue,
                eval_count,
                csg: Some(CsgStep {
                    f_trial: trial.value,
                    b: b_after_step,
                    d: st.d,
                    eta,
                    g_dot_p,
                    norm_restart,
                    descent,
                    l: st.l,
                    m: st.m,
                    s: st.s,
                    t: st.t,
                }),
            };
            if let Some(reason) = options.stop.check(oracle, start_evals) {
                let eval_count = oracle.eval_count() - start_evals;
                log.push(|| row(&st, eval_count));
                break reason;
            }
            let at_u = oracle.evaluate(&st.u)?;
            st.x = st.u.clone();
            st.f_x = st.f_u;
            st.p = at_u.subgradient.clone();
            st.g_last = at_u.subgradient;
            st.m += 1;
            st.t += 1;
            let (lam, eta, d) = wiring.new_epoch(st.m, st.t);
            st.lambda = lam;
            st.eta = eta;
            st.d = d;
            st.s = 0;
            if wiring.epoch_resets_l() {
                st.l = 0;
            }
            st.b = 0.0;
            st.mu += mu_increment;
            if let Some(c) = &mut cert {
                *c = ConvexCertificate::single(st.g_last.clone(), st.x.clone());
            }
            let eval_count = oracle.eval_count() - start_evals;
            log.push(|| row(&st, eval_count));
        } else {
            st.x = y;
            st.f_x = trial.value;
            if st.f_x < st.f_u {
                st.u = st.x.clone();
                st.f_u = st.f_x;
            }
            let d_checked = st.d;
            if st.b > st.d {
                // Distance restart; the subgradient at the new iterate is in hand.
                st.p = trial.subgradient.clone();
                st.m += 1;
                st.t += 1;
                let (lam, eta, d) = wiring.new_epoch(st.m, st.t);
                st.lambda = lam;
                st.eta = eta;
                st.d = d;
                st.s = 0;
                if wiring.epoch_resets_l() {
                    st.l = 0;
                }
                st.b = 0.0;
                event = Event::Distance;
                if let Some(c) = &mut cert {
                    *c = ConvexCertificate::single(trial.subgradient.clone(), st.x.clone());
                }
            } else {
                let (p_next, t_mix) = nr_conv2(&st.p, &trial.subgradient)?;
                st.p = p_next;
                if let Some(c) = &mut cert {
                    c.absorb(t_mix, trial.subgradient.clone(), st.x.clone());
                }
                if norm_restart {
                    event = Event::Norm;
                }
            }
            st.g_last = trial.subgradient;
            let eval_count = oracle.eval_count() - start_evals;
            log.push(|| IterationRecord {
                k: st.k,
                f_x: f_start,
                phi: st.f_u,
                p_norm,
                lambda,
                event,
                eval_count,
                csg: Some(CsgStep {
                    f_trial: st.f_x,
                    b: b_after_step,
                    d: d_checked,
                    eta,
                    g_dot_p,
                    norm_restart,
                    descent,
                    l: st.l,
                    m: st.m,
                    s: st.s,
                    t: st.t,
                }),
            });
        }
        st.k += 1;

        if let Some(obs) = observer.as_deref_mut() {
            obs(&StepView {
                state: &st,
                certificate: cert.as_ref(),
            });
        }
    };

    Ok(RunResult::finish(
        st.u,
        st.f_u,
        oracle.eval_count() - start_evals,
        termination,
        log,
    ))
}
