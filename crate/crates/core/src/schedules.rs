//! Parameter sequences for the conjugate subgradient engine.
//!
//! Every sequence the engine consumes (step seeds, shrink factors, norm
//! thresholds, distance budgets) is described by a [`ScheduleSpec`], a small
//! declarative value that serializes straight into the harness config file.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A parameter sequence indexed from zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ScheduleSpec {
    /// `scale / (index + 1)`.
    Harmonic { scale: f64 },
    /// `scale * ratio^index`.
    Geometric { scale: f64, ratio: f64 },
    /// The same value at every index. `+inf` is allowed and is used for
    /// thresholds that should never fire.
    Constant { value: f64 },
}

impl ScheduleSpec {
    pub fn harmonic(scale: f64) -> Self {
        Self::Harmonic { scale }
    }

    pub fn geometric(scale: f64, ratio: f64) -> Self {
        Self::Geometric { scale, ratio }
    }

    pub fn constant(value: f64) -> Self {
        Self::Constant { value }
    }

    pub fn term(&self, index: usize) -> f64 {
        match *self {
            Self::Harmonic { scale } => scale / (index as f64 + 1.0),
            Self::Geometric { scale, ratio } => scale * ratio.powi(saturating_i32(index)),
            Self::Constant { value } => value,
        }
    }

    /// Checks the shape constraints: positive scale, and `ratio ∈ (0,1)` for
    /// the geometric kind.
    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::Harmonic { scale } if scale > 0.0 && scale.is_finite() => Ok(()),
            Self::Geometric { scale, ratio }
                if scale > 0.0 && scale.is_finite() && ratio > 0.0 && ratio < 1.0 =>
            {
                Ok(())
            }
            Self::Constant { value } if value > 0.0 => Ok(()),
            other => Err(Error::InvalidParameter(format!("bad schedule {other:?}"))),
        }
    }

    /// True when the terms tend to zero.
    pub fn vanishes(&self) -> bool {
        !matches!(self, Self::Constant { .. })
    }

    /// An index beyond which every term is below `eps`, or `None` for a
    /// constant sequence that never gets there.
    pub fn index_below(&self, eps: f64) -> Option<usize> {
        assert!(eps > 0.0, "eps must be positive");
        match *self {
            // c/(i+1) < eps  <=>  i + 1 > c/eps
            Self::Harmonic { scale } => Some((scale / eps).floor() as usize),
            // c σ^i < eps  <=>  i > ln(eps/c)/ln σ
            Self::Geometric { scale, ratio } => {
                if scale < eps {
                    Some(0)
                } else {
                    Some(((eps / scale).ln() / ratio.ln()).floor() as usize + 1)
                }
            }
            Self::Constant { value } => (value < eps).then_some(0),
        }
    }
}

fn saturating_i32(i: usize) -> i32 {
    i32::try_from(i).unwrap_or(i32::MAX)
}

/// Smallest `n` with `term(0) + … + term(n-1) >= target`.
///
/// Only harmonic sequences qualify: a geometric sum is bounded, so no
/// finite witness of divergence exists.
pub fn divergence_witness(spec: &ScheduleSpec, target: f64) -> Result<usize> {
    match spec {
        ScheduleSpec::Harmonic { .. } => {
            spec.validate()?;
            if !(target > 0.0 && target.is_finite()) {
                return Err(Error::InvalidParameter(format!("target {target}")));
            }
            let mut sum = 0.0;
            let mut n = 0;
            while sum < target {
                sum += spec.term(n);
                n += 1;
            }
            Ok(n)
        }
        _ => Err(Error::Inapplicable(
            "divergence witness requires a harmonic schedule".into(),
        )),
    }
}

/// Parameters of the coupled (CSGI) wiring of the conjugate subgradient
/// engine.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CsgiParams {
    /// Sufficient-decrease factor of the descent test, in `(0,1)`.
    pub theta: f64,
    /// Level for the function value restart. `+inf` disables it.
    pub mu: f64,
    /// Amount added to `mu` after every function value restart. Zero keeps
    /// `mu` fixed.
    pub mu_increment: f64,
    /// Step shrink factors after a failed descent test, indexed by `s`.
    pub alpha_prime: ScheduleSpec,
    /// Threshold shrink factors after a norm restart, indexed by `l`.
    pub alpha_dprime: ScheduleSpec,
    /// Step seeds, indexed by the restart epoch `m`.
    pub beta_prime: ScheduleSpec,
    /// Norm threshold seeds, indexed by `m`.
    pub beta_dprime: ScheduleSpec,
    /// Distance budget seeds, indexed by `m`.
    pub beta_tprime: ScheduleSpec,
}

impl CsgiParams {
    pub fn validate(&self) -> Result<()> {
        validate_theta_mu(self.theta, self.mu, self.mu_increment)?;
        for (name, spec) in [
            ("alpha_prime", &self.alpha_prime),
            ("alpha_dprime", &self.alpha_dprime),
        ] {
            spec.validate()?;
            if spec.term(0) >= 1.0 && spec.vanishes() {
                return Err(Error::InvalidParameter(format!(
                    "{name} must map into (0,1)"
                )));
            }
        }
        for spec in [&self.beta_prime, &self.beta_dprime, &self.beta_tprime] {
            spec.validate()?;
        }
        Ok(())
    }
}

pub(crate) fn validate_theta_mu(theta: f64, mu: f64, mu_increment: f64) -> Result<()> {
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "theta {theta} not in (0,1)"
        )));
    }
    if mu.is_nan() {
        return Err(Error::InvalidParameter("mu is NaN".into()));
    }
    if !(mu_increment >= 0.0 && mu_increment.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "mu_increment {mu_increment}"
        )));
    }
    Ok(())
}

/// The benchmark settings: θ = 0.3, μ = +∞, α′ = α″ = 0.8·0.8ˢ,
/// β′ = 0.05/(m+1), β″ = 0.4‖g⁰‖/(m+1), β‴ = 0.05‖g⁰‖/0.7/(m+1).
pub fn benchmark_csgi_params(g0_norm: f64) -> CsgiParams {
    const BETA: f64 = 0.05;
    const SIGMA: f64 = 0.8;
    CsgiParams {
        theta: 0.3,
        mu: f64::INFINITY,
        mu_increment: 0.0,
        alpha_prime: ScheduleSpec::geometric(SIGMA, SIGMA),
        alpha_dprime: ScheduleSpec::geometric(SIGMA, SIGMA),
        beta_prime: ScheduleSpec::harmonic(BETA),
        beta_dprime: ScheduleSpec::harmonic(0.4 * g0_norm),
        beta_tprime: ScheduleSpec::harmonic(BETA * g0_norm / 0.7),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn term_examples() {
        assert_eq!(ScheduleSpec::harmonic(0.05).term(0), 0.05);
        assert!((ScheduleSpec::geometric(0.8, 0.8).term(2) - 0.512).abs() < 1e-15);
        assert_eq!(ScheduleSpec::harmonic(3.0).term(9), 0.3);
        assert_eq!(ScheduleSpec::constant(f64::INFINITY).term(7), f64::INFINITY);
    }

    #[test]
    fn benchmark_params() {
        let p = benchmark_csgi_params(1.0);
        assert_eq!(p.theta, 0.3);
        assert_eq!(p.mu, f64::INFINITY);
        assert!((p.beta_dprime.term(0) - 0.4).abs() < 1e-15);
        assert!((p.beta_tprime.term(0) - 0.0714286).abs() < 1e-7);
        assert!((p.beta_prime.term(4) - 0.01).abs() < 1e-15);
        assert!((p.alpha_prime.term(0) - 0.8).abs() < 1e-15);
        p.validate().unwrap();
    }

    #[test]
    fn witness_examples() {
        assert_eq!(divergence_witness(&ScheduleSpec::harmonic(1.0), 2.0), Ok(4));
        assert_eq!(
            divergence_witness(&ScheduleSpec::harmonic(0.05), 0.05),
            Ok(1)
        );
        assert!(matches!(
            divergence_witness(&ScheduleSpec::geometric(0.8, 0.8), 1.0),
            Err(Error::Inapplicable(_))
        ));
    }

    #[test]
    fn witness_matches_direct_summation() {
        // Independent summation in a different order of operations.
        let mut h = 0.0f64;
        let mut n = 0usize;
        while h < 10.0 {
            n += 1;
            h += 1.0 / n as f64;
        }
        assert_eq!(n, 12367);
        assert_eq!(
            divergence_witness(&ScheduleSpec::harmonic(1.0), 10.0),
            Ok(n)
        );
    }

    #[test]
    fn validate_rejects_bad_shapes() {
        assert!(ScheduleSpec::geometric(0.8, 1.0).validate().is_err());
        assert!(ScheduleSpec::harmonic(0.0).validate().is_err());
        let mut p = benchmark_csgi_params(1.0);
        p.theta = 1.0;
        assert!(p.validate().is_err());
    }

    fn decaying() -> impl Strategy<Value = ScheduleSpec> {
        prop_oneof![
            (1e-3..1e3f64).prop_map(ScheduleSpec::harmonic),
            (1e-3..1e3f64, 0.01..0.99f64).prop_map(|(c, r)| ScheduleSpec::geometric(c, r)),
        ]
    }

    proptest! {
        #[test]
        // Past a few hundred terms the steepest geometric case underflows.
        fn terms_strictly_decrease(spec in decaying(), i in 0usize..100) {
            prop_assert!(spec.term(i + 1) < spec.term(i));
            prop_assert!(spec.term(i) > 0.0);
        }

        #[test]
        fn index_below_is_a_valid_bound(spec in decaying(), eps in 1e-6..1.0f64, extra in 0usize..50) {
            let n = spec.index_below(eps).unwrap();
            prop_assert!(spec.term(n + extra) < eps);
        }

        #[test]
        fn witness_terminates(scale in 1e-2..10.0f64, ratio in 1e-3..8.0f64) {
            // The witness grows like exp(target/scale); keep the ratio small.
            let target = scale * ratio;
            let spec = ScheduleSpec::harmonic(scale);
            let n = divergence_witness(&spec, target).unwrap();
            let sum: f64 = (0..n).map(|m| spec.term(m)).sum();
            prop_assert!(sum >= target * (1.0 - 1e-12));
        }
    }
}
