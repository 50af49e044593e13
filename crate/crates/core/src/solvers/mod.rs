//! Solvers: the conjugate subgradient engine and the classical baselines.

mod baselines;
mod csg;

pub use baselines::{run_asg, run_dasg, run_sgm, run_sgmt, SqrtStepRule};
pub use csg::{
    run_csgi, run_csgi_observed, run_csgm, run_csgm_observed, CsgState, CsgmParams, StepView,
};

use crate::run::{StoppingRule, TraceOptions};

/// Options shared by every solver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOptions {
    pub stop: StoppingRule,
    pub trace: TraceOptions,
    /// Maintain a convex-combination certificate of the direction (engine
    /// only; test support, costs an allocation per step).
    pub track_certificate: bool,
}

impl RunOptions {
    pub fn new(stop: StoppingRule) -> Self {
        Self {
            stop,
            trace: TraceOptions::off(),
            track_certificate: false,
        }
    }

    pub fn traced(stop: StoppingRule) -> Self {
        Self {
            trace: TraceOptions::all(),
            ..Self::new(stop)
        }
    }
}
