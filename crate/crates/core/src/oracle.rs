//! Objective functions and the evaluation-counting wrapper solvers talk to.

use crate::error::{Error, Result};
use crate::vector::{check_dims, DenseVector};

/// A finite convex function together with a rule that picks one element of
/// its subdifferential.
///
/// Implementations are pure: the same point always yields the same value and
/// the same subgradient. Evaluation counting lives in [`CountingOracle`].
pub trait Objective: Send + Sync {
    fn dimension(&self) -> usize;

    /// `f(x)` and one `g ∈ ∂f(x)`. `x.len()` equals [`Self::dimension`].
    fn value_and_subgradient(&self, x: &[f64]) -> (f64, Vec<f64>);

    fn value(&self, x: &[f64]) -> f64 {
        self.value_and_subgradient(x).0
    }
}

/// Result of one oracle call.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub value: f64,
    pub subgradient: DenseVector,
}

/// First-hit bookkeeping for a ladder of gap targets `φ − f* ≤ ε`.
#[derive(Debug, Clone, PartialEq)]
pub struct GapLadder {
    f_star: f64,
    eps: Vec<f64>,
    hits: Vec<Option<u64>>,
}

impl GapLadder {
    pub fn new(f_star: f64, eps: Vec<f64>) -> Self {
        let hits = vec![None; eps.len()];
        Self { f_star, eps, hits }
    }

    pub fn f_star(&self) -> f64 {
        self.f_star
    }

    pub fn eps(&self) -> &[f64] {
        &self.eps
    }

    /// For each ε, the oracle call count at which the record value first
    /// came within ε of `f*`.
    pub fn hits(&self) -> &[Option<u64>] {
        &self.hits
    }

    fn observe(&mut self, record: f64, evals: u64) {
        let gap = record - self.f_star;
        for (eps, hit) in self.eps.iter().zip(self.hits.iter_mut()) {
            if hit.is_none() && gap <= *eps {
                *hit = Some(evals);
            }
        }
    }
}

/// Wraps an [`Objective`], counts calls and keeps the record (smallest)
/// value seen so far.
pub struct CountingOracle<'a> {
    objective: &'a dyn Objective,
    evals: u64,
    record: f64,
    ladder: Option<GapLadder>,
}

impl<'a> CountingOracle<'a> {
    pub fn new(objective: &'a dyn Objective) -> Self {
        Self {
            objective,
            evals: 0,
            record: f64::INFINITY,
            ladder: None,
        }
    }

    pub fn with_ladder(objective: &'a dyn Objective, ladder: GapLadder) -> Self {
        Self {
            ladder: Some(ladder),
            ..Self::new(objective)
        }
    }

    pub fn dimension(&self) -> usize {
        self.objective.dimension()
    }

    pub fn objective(&self) -> &'a dyn Objective {
        self.objective
    }

    pub fn eval_count(&self) -> u64 {
        self.evals
    }

    /// Smallest value returned so far, `+inf` before the first call.
    pub fn record(&self) -> f64 {
        self.record
    }

    pub fn ladder(&self) -> Option<&GapLadder> {
        self.ladder.as_ref()
    }

    pub fn into_ladder(self) -> Option<GapLadder> {
        self.ladder
    }

    pub fn evaluate(&mut self, x: &DenseVector) -> Result<Evaluation> {
        check_dims(self.dimension(), x.dim())?;
        if !x.is_finite() {
            return Err(Error::NonFinite {
                context: "oracle query point".into(),
            });
        }
        let (value, g) = self.objective.value_and_subgradient(x);
        self.evals += 1;
        if !value.is_finite() {
            return Err(Error::NonFinite {
                context: format!("objective value at call {}", self.evals),
            });
        }
        check_dims(self.dimension(), g.len())?;
        let subgradient = DenseVector::new(g).map_err(|_| Error::NonFinite {
            context: format!("subgradient at call {}", self.evals),
        })?;
        if value < self.record {
            self.record = value;
        }
        if let Some(ladder) = &mut self.ladder {
            ladder.observe(self.record, self.evals);
        }
        Ok(Evaluation { value, subgradient })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Abs;

    impl Objective for Abs {
        fn dimension(&self) -> usize {
            1
        }

        fn value_and_subgradient(&self, x: &[f64]) -> (f64, Vec<f64>) {
            (x[0].abs(), vec![x[0].signum()])
        }
    }

    #[test]
    fn counts_every_call() {
        let mut o = CountingOracle::new(&Abs);
        for i in 0..5 {
            o.evaluate(&DenseVector::new(vec![i as f64]).unwrap())
                .unwrap();
            assert_eq!(o.eval_count(), i + 1);
        }
        assert_eq!(o.record(), 0.0);
    }

    #[test]
    fn rejects_wrong_dimension() {
        let mut o = CountingOracle::new(&Abs);
        assert!(o.evaluate(&DenseVector::zeros(2)).is_err());
        assert_eq!(o.eval_count(), 0);
    }

    #[test]
    fn ladder_records_first_hits() {
        let mut o = CountingOracle::with_ladder(&Abs, GapLadder::new(0.0, vec![1.0, 0.1]));
        for x in [3.0, 0.5, 2.0, 0.05] {
            o.evaluate(&DenseVector::new(vec![x]).unwrap()).unwrap();
        }
        assert_eq!(o.ladder().unwrap().hits(), &[Some(2), Some(4)]);
    }
}
