//! Method registry: names, parameter maps and dispatch to the solvers.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use nsopt::problems::ProblemSpec;
use nsopt::schedules::{benchmark_csgi_params, CsgiParams, ScheduleSpec};
use nsopt::solvers::{self, CsgmParams, RunOptions, SqrtStepRule};
use nsopt::{CountingOracle, DenseVector, RunResult};

use crate::error::{BenchError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Sgm,
    Sgmt,
    Asg,
    Dasg,
    Csgi,
    Csgm,
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method::Sgm,
        Method::Sgmt,
        Method::Asg,
        Method::Dasg,
        Method::Csgi,
        Method::Csgm,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Sgm => "sgm",
            Method::Sgmt => "sgmt",
            Method::Asg => "asg",
            Method::Dasg => "dasg",
            Method::Csgi => "csgi",
            Method::Csgm => "csgm",
        }
    }

    pub fn describe(self) -> &'static str {
        match self {
            Method::Sgm => "subgradient method, step lambda/(k+1)",
            Method::Sgmt => "subgradient method, step lambda/sqrt(k+1)",
            Method::Asg => "simple dual averaging",
            Method::Dasg => "simple double averaging",
            Method::Csgi => "conjugate subgradient, coupled thresholds",
            Method::Csgm => "conjugate subgradient, free threshold sequences",
        }
    }

    /// Parameter keys accepted by `--param key=value`.
    pub fn param_keys(self) -> &'static [&'static str] {
        match self {
            Method::Sgm => &["lambda"],
            Method::Sgmt | Method::Asg | Method::Dasg => &["lipschitz", "x_star_dist"],
            Method::Csgi => &[
                "theta",
                "mu",
                "mu_increment",
                "sigma",
                "beta_prime",
                "beta_dprime",
                "beta_tprime",
            ],
            Method::Csgm => &[
                "theta",
                "mu",
                "mu_increment",
                "sigma",
                "beta",
                "eta",
                "distance",
            ],
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s.to_ascii_lowercase())
            .ok_or_else(|| BenchError::usage(format!("unknown method {s:?}")))
    }
}

/// Default step scale of the plain subgradient method.
pub const SGM_LAMBDA: f64 = 0.1;

/// Parameter lookup with defaults; rejects keys the method does not know.
struct Params<'a> {
    method: Method,
    map: &'a BTreeMap<String, f64>,
}

impl<'a> Params<'a> {
    fn new(method: Method, map: &'a BTreeMap<String, f64>) -> Result<Self> {
        if let Some(key) = map
            .keys()
            .find(|k| !method.param_keys().contains(&k.as_str()))
        {
            return Err(BenchError::usage(format!(
                "method {method} has no parameter {key:?} (known: {})",
                method.param_keys().join(", ")
            )));
        }
        Ok(Self { method, map })
    }

    fn get(&self, key: &str) -> Option<f64> {
        debug_assert!(self.method.param_keys().contains(&key));
        self.map.get(key).copied()
    }

    fn or(&self, key: &str, default: f64) -> f64 {
        self.get(key).unwrap_or(default)
    }
}

fn g0_norm(problem: &ProblemSpec, x0: &DenseVector) -> f64 {
    nsopt::vector::norm(&problem.objective.value_and_subgradient(x0).1)
}

/// Harmonic schedule, or a constant one when the scale is infinite.
fn threshold(scale: f64) -> ScheduleSpec {
    if scale.is_infinite() {
        ScheduleSpec::constant(scale)
    } else {
        ScheduleSpec::harmonic(scale)
    }
}

/// Coupled-wiring parameters: the benchmark settings with overrides.
pub fn csgi_params(
    problem: &ProblemSpec,
    x0: &DenseVector,
    map: &BTreeMap<String, f64>,
) -> Result<CsgiParams> {
    let p = Params::new(Method::Csgi, map)?;
    let g0 = g0_norm(problem, x0);
    let mut params = benchmark_csgi_params(g0);
    params.theta = p.or("theta", params.theta);
    params.mu = p.or("mu", params.mu);
    params.mu_increment = p.or("mu_increment", params.mu_increment);
    if let Some(sigma) = p.get("sigma") {
        params.alpha_prime = ScheduleSpec::geometric(sigma, sigma);
        params.alpha_dprime = ScheduleSpec::geometric(sigma, sigma);
    }
    let beta = p.or("beta_prime", 0.05);
    params.beta_prime = ScheduleSpec::harmonic(beta);
    params.beta_dprime = threshold(p.or("beta_dprime", 0.4 * g0));
    params.beta_tprime = threshold(p.or("beta_tprime", beta * g0 / 0.7));
    params.validate()?;
    Ok(params)
}

pub fn csgm_params(
    problem: &ProblemSpec,
    x0: &DenseVector,
    map: &BTreeMap<String, f64>,
) -> Result<CsgmParams> {
    let p = Params::new(Method::Csgm, map)?;
    let g0 = g0_norm(problem, x0);
    let sigma = p.or("sigma", 0.8);
    let beta = p.or("beta", 0.05);
    let params = CsgmParams {
        theta: p.or("theta", 0.3),
        mu: p.or("mu", f64::INFINITY),
        mu_increment: p.or("mu_increment", 0.0),
        alpha: ScheduleSpec::geometric(sigma, sigma),
        beta: ScheduleSpec::harmonic(beta),
        eta: threshold(p.or("eta", 0.4 * g0)),
        distance: threshold(p.or("distance", beta * g0 / 0.7)),
    };
    params.validate()?;
    Ok(params)
}

/// Step rule `‖x⁰ − x*‖/L / √(k+1)`; defaults to `L = ‖g⁰‖` and the
/// problem's known minimizer.
pub fn sqrt_rule(
    method: Method,
    problem: &ProblemSpec,
    x0: &DenseVector,
    map: &BTreeMap<String, f64>,
) -> Result<SqrtStepRule> {
    let p = Params::new(method, map)?;
    let lipschitz = p.get("lipschitz").unwrap_or_else(|| g0_norm(problem, x0));
    let x_star_dist = match (p.get("x_star_dist"), &problem.x_star) {
        (Some(d), _) => d,
        (None, Some(x_star)) => x0.distance(x_star)?,
        (None, None) => {
            return Err(BenchError::usage(format!(
                "{method} on {} needs --param x_star_dist=...",
                problem.name
            )))
        }
    };
    Ok(SqrtStepRule {
        x_star_dist,
        lipschitz,
    })
}

/// Runs `method` on `problem` from `x0`.
pub fn run_method(
    method: Method,
    problem: &ProblemSpec,
    x0: &DenseVector,
    map: &BTreeMap<String, f64>,
    oracle: &mut CountingOracle<'_>,
    options: &RunOptions,
) -> Result<RunResult> {
    let result = match method {
        Method::Sgm => {
            let p = Params::new(method, map)?;
            solvers::run_sgm(oracle, x0, p.or("lambda", SGM_LAMBDA), options)?
        }
        Method::Sgmt => {
            solvers::run_sgmt(oracle, x0, &sqrt_rule(method, problem, x0, map)?, options)?
        }
        Method::Asg => {
            solvers::run_asg(oracle, x0, &sqrt_rule(method, problem, x0, map)?, options)?
        }
        Method::Dasg => {
            solvers::run_dasg(oracle, x0, &sqrt_rule(method, problem, x0, map)?, options)?
        }
        Method::Csgi => solvers::run_csgi(oracle, x0, &csgi_params(problem, x0, map)?, options)?,
        Method::Csgm => solvers::run_csgm(oracle, x0, &csgm_params(problem, x0, map)?, options)?,
    };
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nsopt::problems::shor_problem;

    #[test]
    fn names_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.name().parse::<Method>().unwrap(), m);
        }
        assert!("nasgm".parse::<Method>().is_err());
    }

    #[test]
    fn unknown_param_is_usage_error() {
        let shor = shor_problem();
        let mut map = BTreeMap::new();
        map.insert("lambda".to_string(), 0.1);
        let err = csgi_params(&shor, &shor.x0_default, &map).unwrap_err();
        assert!(err.is_usage());
    }

    #[test]
    fn csgi_defaults_match_benchmark_settings() {
        let shor = shor_problem();
        let p = csgi_params(&shor, &shor.x0_default, &BTreeMap::new()).unwrap();
        let g0 = g0_norm(&shor, &shor.x0_default);
        assert_eq!(p, benchmark_csgi_params(g0));
    }
}
