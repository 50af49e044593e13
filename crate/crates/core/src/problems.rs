//! Benchmark problem catalog.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::oracle::Objective;
use crate::vector::DenseVector;

/// A named test problem: objective, default start and (when known) optimum.
#[derive(Clone)]
pub struct ProblemSpec {
    pub name: String,
    pub objective: Arc<dyn Objective>,
    pub x0_default: DenseVector,
    pub f_star: Option<f64>,
    pub x_star: Option<DenseVector>,
}

impl ProblemSpec {
    pub fn dimension(&self) -> usize {
        self.objective.dimension()
    }
}

impl fmt::Debug for ProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemSpec")
            .field("name", &self.name)
            .field("dimension", &self.dimension())
            .field("f_star", &self.f_star)
            .finish()
    }
}

/// Names accepted by [`problem_by_name`].
pub const CATALOG: &[&str] = &["shor", "l1", "maxq", "quadratic"];

/// Looks up a catalog problem. `l1`, `maxq` and `quadratic` take an optional
/// dimension suffix (`l1:3`, default 3); `quadratic` also accepts a
/// strong-convexity constant (`quadratic:5:0.1`, default 0.1).
pub fn problem_by_name(name: &str) -> Result<ProblemSpec> {
    let mut parts = name.split(':');
    let base = parts.next().unwrap_or_default();
    let dim = |s: Option<&str>| -> Result<usize> {
        s.map_or(Ok(3), |d| {
            d.parse()
                .map_err(|_| Error::InvalidParameter(format!("bad dimension in {name:?}")))
        })
    };
    let problem = match base {
        "shor" => shor_problem(),
        "l1" => l1_problem(dim(parts.next())?)?,
        "maxq" => maxq_problem(dim(parts.next())?)?,
        "quadratic" => {
            let n = dim(parts.next())?;
            let kappa = parts.next().map_or(Ok(0.1), |k| {
                k.parse()
                    .map_err(|_| Error::InvalidParameter(format!("bad kappa in {name:?}")))
            })?;
            quadratic_problem(n, kappa)?
        }
        _ => return Err(Error::InvalidParameter(format!("unknown problem {name:?}"))),
    };
    if parts.next().is_some() {
        return Err(Error::InvalidParameter(format!(
            "trailing fields in {name:?}"
        )));
    }
    Ok(problem)
}

const SHOR_CENTERS: [[f64; 5]; 10] = [
    [0.0, 0.0, 0.0, 0.0, 0.0],
    [2.0, 1.0, 1.0, 1.0, 3.0],
    [1.0, 2.0, 1.0, 1.0, 2.0],
    [1.0, 4.0, 1.0, 2.0, 2.0],
    [3.0, 2.0, 1.0, 0.0, 1.0],
    [0.0, 2.0, 1.0, 0.0, 1.0],
    [1.0, 1.0, 1.0, 1.0, 1.0],
    [1.0, 0.0, 1.0, 2.0, 1.0],
    [0.0, 0.0, 2.0, 1.0, 0.0],
    [1.0, 1.0, 2.0, 0.0, 0.0],
];

const SHOR_WEIGHTS: [f64; 10] = [1.0, 5.0, 10.0, 2.0, 4.0, 3.0, 1.7, 2.5, 6.0, 3.5];

/// Reported optimal value of the Shor problem.
pub const SHOR_F_STAR: f64 = 22.60016;

/// High-accuracy minimizer of the Shor problem (value 22.6001620958).
pub const SHOR_X_STAR: [f64; 5] = [
    1.1243510101964493,
    0.9794615993127677,
    1.4777077519715185,
    0.9202334858999854,
    1.1242915880012314,
];

/// Weighted checksum `Σ (i+1)(j+1) aᵢⱼ + Σ (i+1) bᵢ` of the embedded data.
pub fn shor_data_checksum() -> f64 {
    let mut sum = 0.0;
    for (i, row) in SHOR_CENTERS.iter().enumerate() {
        for (j, a) in row.iter().enumerate() {
            sum += ((i + 1) * (j + 1)) as f64 * a;
        }
        sum += (i + 1) as f64 * SHOR_WEIGHTS[i];
    }
    sum
}

/// `f(x) = maxᵢ bᵢ ‖x − aᵢ‖²` over ten weighted centers in ℝ⁵.
#[derive(Debug, Clone, Copy, Default)]
pub struct Shor;

impl Shor {
    /// The ten piece values at `x`.
    pub fn pieces(x: &[f64]) -> [f64; 10] {
        let mut out = [0.0; 10];
        for (o, (a, b)) in out.iter_mut().zip(SHOR_CENTERS.iter().zip(SHOR_WEIGHTS)) {
            *o = b * x
                .iter()
                .zip(a)
                .map(|(xj, aj)| (xj - aj) * (xj - aj))
                .sum::<f64>();
        }
        out
    }
}

impl Objective for Shor {
    fn dimension(&self) -> usize {
        5
    }

    fn value_and_subgradient(&self, x: &[f64]) -> (f64, Vec<f64>) {
        let pieces = Self::pieces(x);
        let i = argmax_first(&pieces);
        let g = x
            .iter()
            .zip(&SHOR_CENTERS[i])
            .map(|(xj, aj)| 2.0 * SHOR_WEIGHTS[i] * (xj - aj))
            .collect();
        (pieces[i], g)
    }
}

/// Index of the first maximal element.
fn argmax_first(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate().skip(1) {
        if *v > values[best] {
            best = i;
        }
    }
    best
}

pub fn shor_problem() -> ProblemSpec {
    ProblemSpec {
        name: "shor".into(),
        objective: Arc::new(Shor),
        x0_default: DenseVector::from_vec_unchecked(vec![0.0, 0.0, 0.0, 0.0, 1.0]),
        f_star: Some(SHOR_F_STAR),
        x_star: Some(DenseVector::from_vec_unchecked(SHOR_X_STAR.to_vec())),
    }
}

/// `f(x) = Σ |xᵢ|`, subgradient `sign(xᵢ)` with `sign(0) = 0`.
#[derive(Debug, Clone, Copy)]
pub struct L1 {
    pub dim: usize,
}

impl Objective for L1 {
    fn dimension(&self) -> usize {
        self.dim
    }

    fn value_and_subgradient(&self, x: &[f64]) -> (f64, Vec<f64>) {
        let value = x.iter().map(|v| v.abs()).sum();
        let g = x
            .iter()
            .map(|&v| {
                if v > 0.0 {
                    1.0
                } else if v < 0.0 {
                    -1.0
                } else {
                    0.0
                }
            })
            .collect();
        (value, g)
    }
}

pub fn l1_problem(dimension: usize) -> Result<ProblemSpec> {
    check_dimension(dimension)?;
    let x0 = (0..dimension)
        .map(|i| if i % 2 == 0 { 1.0 } else { -2.0 })
        .collect();
    Ok(ProblemSpec {
        name: format!("l1:{dimension}"),
        objective: Arc::new(L1 { dim: dimension }),
        x0_default: DenseVector::from_vec_unchecked(x0),
        f_star: Some(0.0),
        x_star: Some(DenseVector::zeros(dimension)),
    })
}

/// `f(x) = maxᵢ xᵢ²`, subgradient `2 x_{i*} e_{i*}` at the first maximizer.
#[derive(Debug, Clone, Copy)]
pub struct MaxQuad {
    pub dim: usize,
}

impl Objective for MaxQuad {
    fn dimension(&self) -> usize {
        self.dim
    }

    fn value_and_subgradient(&self, x: &[f64]) -> (f64, Vec<f64>) {
        let squares: Vec<f64> = x.iter().map(|v| v * v).collect();
        let i = argmax_first(&squares);
        let mut g = vec![0.0; x.len()];
        g[i] = 2.0 * x[i];
        (squares[i], g)
    }
}

pub fn maxq_problem(dimension: usize) -> Result<ProblemSpec> {
    check_dimension(dimension)?;
    let x0 = (0..dimension).map(|i| (i + 1) as f64).collect();
    Ok(ProblemSpec {
        name: format!("maxq:{dimension}"),
        objective: Arc::new(MaxQuad { dim: dimension }),
        x0_default: DenseVector::from_vec_unchecked(x0),
        f_star: Some(0.0),
        x_star: Some(DenseVector::zeros(dimension)),
    })
}

/// Largest curvature of [`quadratic_problem`].
pub const QUADRATIC_LIPSCHITZ: f64 = 4.0;

/// `f(x) = ½ Σ cᵢ xᵢ²`.
#[derive(Debug, Clone)]
pub struct Quadratic {
    pub curvatures: Vec<f64>,
}

impl Objective for Quadratic {
    fn dimension(&self) -> usize {
        self.curvatures.len()
    }

    fn value_and_subgradient(&self, x: &[f64]) -> (f64, Vec<f64>) {
        let value = 0.5
            * self
                .curvatures
                .iter()
                .zip(x)
                .map(|(c, v)| c * v * v)
                .sum::<f64>();
        let g = self.curvatures.iter().zip(x).map(|(c, v)| c * v).collect();
        (value, g)
    }
}

/// Strongly convex quadratic with curvatures evenly spaced over
/// `[kappa, 4]`.
pub fn quadratic_problem(dimension: usize, kappa: f64) -> Result<ProblemSpec> {
    check_dimension(dimension)?;
    if !(kappa > 0.0 && kappa <= QUADRATIC_LIPSCHITZ) {
        return Err(Error::InvalidParameter(format!(
            "kappa {kappa} not in (0, {QUADRATIC_LIPSCHITZ}]"
        )));
    }
    let curvatures = if dimension == 1 {
        vec![kappa]
    } else {
        (0..dimension)
            .map(|i| kappa + (QUADRATIC_LIPSCHITZ - kappa) * i as f64 / (dimension - 1) as f64)
            .collect()
    };
    Ok(ProblemSpec {
        name: format!("quadratic:{dimension}:{kappa}"),
        objective: Arc::new(Quadratic { curvatures }),
        x0_default: DenseVector::from_vec_unchecked(vec![1.0; dimension]),
        f_star: Some(0.0),
        x_star: Some(DenseVector::zeros(dimension)),
    })
}

fn check_dimension(dimension: usize) -> Result<()> {
    if dimension == 0 {
        return Err(Error::InvalidParameter("dimension must be >= 1".into()));
    }
    Ok(())
}
