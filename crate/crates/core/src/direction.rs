//! The smallest-norm direction kernel and the checks that certify it.
//!
//! The conjugate subgradient direction is updated by projecting the origin
//! onto the segment between the previous direction and the new subgradient.
//! Along a run between restarts the direction therefore stays a convex
//! combination of observed subgradients; [`ConvexCertificate`] tracks that
//! combination explicitly so tests can verify the deviation estimate.

use crate::error::{Error, Result};
use crate::oracle::Objective;
use crate::vector::{check_dims, dot, norm, DenseVector};

/// Point of the segment `[p, g]` nearest to the origin.
///
/// Returns the point `p + t (g − p)` together with `t ∈ [0, 1]`. When the
/// segment degenerates to a point (`p == g`), returns `p` with `t = 0`.
pub fn nr_conv2(p: &DenseVector, g: &DenseVector) -> Result<(DenseVector, f64)> {
    check_dims(p.dim(), g.dim())?;
    let t = nearest_weight(p, g);
    let result = p
        .iter()
        .zip(g.iter())
        .map(|(pi, gi)| pi + t * (gi - pi))
        .collect();
    Ok((DenseVector::from_vec_unchecked(result), t))
}

fn nearest_weight(p: &[f64], g: &[f64]) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for (pi, gi) in p.iter().zip(g) {
        let diff = pi - gi;
        num += pi * diff;
        den += diff * diff;
    }
    if den == 0.0 {
        return 0.0;
    }
    (num / den).clamp(0.0, 1.0)
}

/// One term `weight · subgradient`, where the subgradient was evaluated at
/// `point`.
#[derive(Debug, Clone, PartialEq)]
pub struct Atom {
    pub weight: f64,
    pub subgradient: DenseVector,
    pub point: DenseVector,
}

/// Explicit convex combination of subgradients that reproduces a direction.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexCertificate {
    atoms: Vec<Atom>,
}

impl ConvexCertificate {
    /// Certificate of the single-subgradient direction `p = g`.
    pub fn single(subgradient: DenseVector, point: DenseVector) -> Self {
        Self {
            atoms: vec![Atom {
                weight: 1.0,
                subgradient,
                point,
            }],
        }
    }

    pub fn from_atoms(atoms: Vec<Atom>) -> Self {
        Self { atoms }
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    /// Mirrors `p ← p + t (g − p)`: existing weights scale by `1 − t` and
    /// `g` enters with weight `t`.
    pub fn absorb(&mut self, t: f64, subgradient: DenseVector, point: DenseVector) {
        for atom in &mut self.atoms {
            atom.weight *= 1.0 - t;
        }
        self.atoms.push(Atom {
            weight: t,
            subgradient,
            point,
        });
    }

    /// `Σ μⱼ gʲ`.
    pub fn combination(&self) -> DenseVector {
        let dim = self.atoms.first().map_or(0, |a| a.subgradient.dim());
        let mut out = vec![0.0; dim];
        for atom in &self.atoms {
            for (o, g) in out.iter_mut().zip(atom.subgradient.iter()) {
                *o += atom.weight * g;
            }
        }
        DenseVector::from_vec_unchecked(out)
    }

    pub fn weight_sum(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight).sum()
    }

    /// Weights non-negative and summing to one within `1e-12`.
    pub fn weights_valid(&self) -> bool {
        !self.atoms.is_empty()
            && self.atoms.iter().all(|a| a.weight >= 0.0)
            && (self.weight_sum() - 1.0).abs() <= 1e-12
    }

    /// `max ‖gʲ‖`.
    pub fn max_subgradient_norm(&self) -> f64 {
        self.atoms
            .iter()
            .map(|a| a.subgradient.norm())
            .fold(0.0, f64::max)
    }
}

/// Outcome of checking the direction norm decay bound on a sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundCheck {
    Holds,
    /// The bound fails at this index.
    Violated {
        index: usize,
    },
    /// `⟨g^{i+1}, p^i⟩ ≤ θ‖p^i‖²` does not hold at this index, so the
    /// bound does not apply to the sequence.
    Inapplicable {
        index: usize,
    },
}

/// Builds `p⁰ = g⁰`, `p^{i+1} = Nr conv{p^i, g^{i+1}}` and checks
/// `‖p^i‖ ≤ C / ((1 − θ) √(i+1))` with `C = max ‖g^i‖`.
pub fn norm_bound_check(g_seq: &[DenseVector], theta: f64) -> Result<BoundCheck> {
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "theta {theta} not in (0,1)"
        )));
    }
    let Some(first) = g_seq.first() else {
        return Ok(BoundCheck::Holds);
    };
    let c = g_seq.iter().map(|g| g.norm()).fold(0.0, f64::max);
    let mut p = first.clone();
    for i in 0..g_seq.len() {
        let bound = c / ((1.0 - theta) * ((i + 1) as f64).sqrt());
        if p.norm() > bound * (1.0 + 1e-12) {
            return Ok(BoundCheck::Violated { index: i });
        }
        let Some(next) = g_seq.get(i + 1) else {
            break;
        };
        let pn2 = p.norm().powi(2);
        if next.dot(&p)? > theta * pn2 {
            return Ok(BoundCheck::Inapplicable { index: i });
        }
        p = nr_conv2(&p, next)?.0;
    }
    Ok(BoundCheck::Holds)
}

/// Checks the deviation estimate
/// `f(y) − Σ μⱼ f(yʲ) ≥ ⟨p, y − x⟩ − δ·maxⱼ‖gʲ‖` at every probe `y`,
/// where `p = Σ μⱼ gʲ` and every `yʲ` lies in the ball `B(center, δ)`.
///
/// A tiny relative slack (1e-10 of the magnitudes involved) absorbs
/// rounding. Returns `Ok(false)` on the first failing probe.
pub fn certificate_check(
    certificate: &ConvexCertificate,
    center: &DenseVector,
    delta: f64,
    probe_points: &[DenseVector],
    f: &dyn Objective,
) -> Result<bool> {
    if !certificate.weights_valid() {
        return Err(Error::InvalidParameter(
            "certificate weights must be non-negative and sum to 1".into(),
        ));
    }
    if !(delta >= 0.0 && delta.is_finite()) {
        return Err(Error::InvalidParameter(format!("delta {delta}")));
    }
    let mut weighted_value = 0.0;
    let mut weighted_magnitude = 0.0;
    for (index, atom) in certificate.atoms().iter().enumerate() {
        let distance = atom.point.distance(center)?;
        if distance > delta * (1.0 + 1e-12) + 1e-12 {
            return Err(Error::OutsideBall {
                index,
                distance,
                radius: delta,
            });
        }
        let value = f.value(&atom.point);
        weighted_value += atom.weight * value;
        weighted_magnitude += atom.weight * value.abs();
    }
    let p = certificate.combination();
    let slack_term = delta * certificate.max_subgradient_norm();
    for y in probe_points {
        check_dims(center.dim(), y.dim())?;
        let fy = f.value(y);
        let shift: Vec<f64> = y.iter().zip(center.iter()).map(|(a, b)| a - b).collect();
        let lhs = fy - weighted_value;
        let rhs = dot(&p, &shift)? - slack_term;
        let tol = 1e-10 * (1.0 + fy.abs() + weighted_magnitude + norm(&p) * norm(&shift));
        if lhs < rhs - tol {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(c: &[f64]) -> DenseVector {
        DenseVector::new(c.to_vec()).unwrap()
    }

    #[test]
    fn symmetric_segment_gives_midpoint() {
        let (r, t) = nr_conv2(&v(&[1.0, 0.0]), &v(&[0.0, 1.0])).unwrap();
        assert_eq!(t, 0.5);
        assert_eq!(r.as_slice(), &[0.5, 0.5]);
    }

    #[test]
    fn segment_through_origin() {
        let (r, t) = nr_conv2(&v(&[2.0, 0.0]), &v(&[-1.0, 0.0])).unwrap();
        assert!((t - 2.0 / 3.0).abs() < 1e-15);
        assert!(r.norm() < 1e-15);
    }

    #[test]
    fn nearer_endpoint_kept() {
        let (r, t) = nr_conv2(&v(&[1.0, 1.0]), &v(&[2.0, 2.0])).unwrap();
        assert_eq!(t, 0.0);
        assert_eq!(r.as_slice(), &[1.0, 1.0]);
    }

    #[test]
    fn degenerate_segment() {
        let (r, t) = nr_conv2(&v(&[3.0, -1.0]), &v(&[3.0, -1.0])).unwrap();
        assert_eq!(t, 0.0);
        assert_eq!(r.as_slice(), &[3.0, -1.0]);
    }

    #[test]
    fn mismatched_dims() {
        assert!(matches!(
            nr_conv2(&v(&[1.0]), &v(&[1.0, 2.0])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn certificate_tracks_projection() {
        let g0 = v(&[1.0, 0.0]);
        let g1 = v(&[0.0, 1.0]);
        let mut cert = ConvexCertificate::single(g0.clone(), v(&[0.0, 0.0]));
        let (p1, t) = nr_conv2(&g0, &g1).unwrap();
        cert.absorb(t, g1, v(&[0.1, 0.0]));
        assert!(cert.weights_valid());
        assert!(cert.combination().distance(&p1).unwrap() < 1e-15);
    }

    #[test]
    fn alternating_sequence_satisfies_bound() {
        let seq: Vec<_> = (0..200)
            .map(|i| {
                if i % 2 == 0 {
                    v(&[1.0, 0.0])
                } else {
                    v(&[-1.0, 0.0])
                }
            })
            .collect();
        assert_eq!(norm_bound_check(&seq, 0.5).unwrap(), BoundCheck::Holds);
    }

    #[test]
    fn constant_sequence_is_inapplicable() {
        let seq = vec![v(&[1.0, 0.0]); 10];
        assert_eq!(
            norm_bound_check(&seq, 0.5).unwrap(),
            BoundCheck::Inapplicable { index: 0 }
        );
    }
}
