use approx::assert_relative_eq;
use nsopt::problems::{problem_by_name, shor_problem, Shor, SHOR_X_STAR};
use nsopt::solvers::{run_asg, run_dasg, run_sgm, run_sgmt, RunOptions, SqrtStepRule};
use nsopt::{CountingOracle, DenseVector, Objective, StoppingRule};

fn v(c: &[f64]) -> DenseVector {
    DenseVector::new(c.to_vec()).unwrap()
}

fn abs_value() -> nsopt::problems::ProblemSpec {
    problem_by_name("l1:1").unwrap()
}

fn budget(n: u64) -> RunOptions {
    RunOptions::traced(StoppingRule::budget(n))
}

#[test]
fn sgm_first_step_on_abs() {
    let p = abs_value();
    let mut oracle = CountingOracle::new(p.objective.as_ref());
    let run = run_sgm(&mut oracle, &v(&[1.0]), 0.1, &budget(2)).unwrap();
    assert_relative_eq!(run.best_point[0], 0.9, epsilon = 1e-15);
    assert_eq!(run.total_evals, 2);
}

#[test]
fn sgm_on_abs_never_hits_zero() {
    let p = abs_value();
    let mut oracle = CountingOracle::new(p.objective.as_ref());
    let run = run_sgm(&mut oracle, &v(&[1.0]), 0.1, &budget(20_000)).unwrap();
    assert!(run.best_value > 0.0);
    assert!(run.best_value < 1e-2);
    let phis: Vec<f64> = run.trace.iter().map(|r| r.phi).collect();
    assert!(phis.windows(2).all(|w| w[1] <= w[0]));
}

fn rule(scale: f64) -> SqrtStepRule {
    SqrtStepRule {
        x_star_dist: scale,
        lipschitz: 1.0,
    }
}

#[test]
fn first_steps_of_sqrt_rules() {
    let p = abs_value();
    let x0 = v(&[1.0]);
    let r = rule(0.5);
    let mut oracle = CountingOracle::new(p.objective.as_ref());
    let sgmt = run_sgmt(&mut oracle, &x0, &r, &budget(2)).unwrap();
    // x¹ = x⁰ − λ g⁰ with g⁰ = 1.
    assert_relative_eq!(sgmt.best_point[0], 0.5, epsilon = 1e-15);
    let mut oracle = CountingOracle::new(p.objective.as_ref());
    let asg = run_asg(&mut oracle, &x0, &r, &budget(2)).unwrap();
    assert_eq!(asg.best_point, sgmt.best_point);
    let mut oracle = CountingOracle::new(p.objective.as_ref());
    let dasg = run_dasg(&mut oracle, &x0, &r, &budget(2)).unwrap();
    // Half of the dual averaging step.
    assert_relative_eq!(dasg.best_point[0], 0.75, epsilon = 1e-15);
}

#[test]
fn step_rule_scale() {
    let r = SqrtStepRule {
        x_star_dist: 3.0,
        lipschitz: 2.0,
    };
    assert_eq!(r.scale(), 1.5);
    assert_relative_eq!(r.step(3), 0.75, epsilon = 1e-15);
    let p = abs_value();
    let mut oracle = CountingOracle::new(p.objective.as_ref());
    let bad = SqrtStepRule {
        x_star_dist: 0.0,
        lipschitz: 1.0,
    };
    assert!(run_sgmt(&mut oracle, &v(&[1.0]), &bad, &budget(2)).is_err());
    assert!(run_sgm(&mut oracle, &v(&[1.0]), -0.1, &budget(2)).is_err());
}

/// Straight-line reimplementation of the four recursions on the Shor
/// problem, with the subgradient recomputed from the piece formula.
fn reference_best(method: &str, steps: usize) -> f64 {
    let x0 = [0.0, 0.0, 0.0, 0.0, 1.0];
    let (_, g0) = Shor.value_and_subgradient(&x0);
    let l = g0.iter().map(|c| c * c).sum::<f64>().sqrt();
    let r: f64 = x0
        .iter()
        .zip(SHOR_X_STAR)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    let scale = r / l;
    let mut x = x0;
    let mut sum = [0.0; 5];
    let mut best = f64::INFINITY;
    for k in 0..steps {
        let (f, g) = Shor.value_and_subgradient(&x);
        best = best.min(f);
        let kf = k as f64;
        match method {
            "sgm" => (0..5).for_each(|i| x[i] -= 0.1 / (kf + 1.0) * g[i]),
            "sgmt" => (0..5).for_each(|i| x[i] -= scale / (kf + 1.0).sqrt() * g[i]),
            "asg" => (0..5).for_each(|i| {
                sum[i] += g[i];
                x[i] = x0[i] - scale / (kf + 1.0).sqrt() * sum[i];
            }),
            "dasg" => (0..5).for_each(|i| {
                sum[i] += g[i];
                let y = x0[i] - scale / (kf + 1.0).sqrt() * sum[i];
                let mu = (kf + 1.0) / (kf + 2.0);
                x[i] = mu * x[i] + (1.0 - mu) * y;
            }),
            _ => unreachable!(),
        }
    }
    best
}

#[test]
fn shor_runs_match_reference_recursions() {
    let p = shor_problem();
    let x0 = p.x0_default.clone();
    let r = SqrtStepRule {
        x_star_dist: x0.distance(p.x_star.as_ref().unwrap()).unwrap(),
        lipschitz: Shor
            .value_and_subgradient(&x0)
            .1
            .iter()
            .map(|c| c * c)
            .sum::<f64>()
            .sqrt(),
    };
    let opts = RunOptions::new(StoppingRule::budget(500));
    let f = p.objective.as_ref();
    let results = [
        ("sgm", run_sgm(&mut CountingOracle::new(f), &x0, 0.1, &opts)),
        (
            "sgmt",
            run_sgmt(&mut CountingOracle::new(f), &x0, &r, &opts),
        ),
        ("asg", run_asg(&mut CountingOracle::new(f), &x0, &r, &opts)),
        (
            "dasg",
            run_dasg(&mut CountingOracle::new(f), &x0, &r, &opts),
        ),
    ];
    for (name, run) in results {
        let run = run.unwrap();
        assert_eq!(run.total_evals, 500);
        assert_relative_eq!(
            run.best_value,
            reference_best(name, 500),
            max_relative = 1e-12
        );
    }
}

#[test]
fn asg_stays_bounded_on_quadratic() {
    let p = problem_by_name("quadratic:3:0.5").unwrap();
    let mut oracle = CountingOracle::new(p.objective.as_ref());
    let run = run_asg(&mut oracle, &p.x0_default, &rule(1.0), &budget(5000)).unwrap();
    assert!(run.trace.iter().all(|r| r.f_x.is_finite() && r.f_x < 1e3));
    assert!(run.best_value < 0.1);
}

#[test]
fn gap_target_stops_early() {
    let p = abs_value();
    let mut oracle = CountingOracle::new(p.objective.as_ref());
    let opts = RunOptions::traced(StoppingRule::gap(0.0, 0.5, 1000));
    let run = run_sgm(&mut oracle, &v(&[1.0]), 0.1, &opts).unwrap();
    assert_eq!(run.termination, nsopt::Termination::TargetReached);
    assert!(run.best_value <= 0.5);
    // φ crossed 0.5 on the last evaluation and not before.
    let phis: Vec<f64> = run.trace.iter().map(|r| r.phi).collect();
    assert!(phis[..phis.len() - 1].iter().all(|&f| f > 0.5));
    assert_eq!(run.trace.last().unwrap().eval_count, run.total_evals);
}
