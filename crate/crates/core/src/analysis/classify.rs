//! Fixture-level predicates aggregated over sample points.

use serde::Serialize;

use super::point::PointEval;
use super::Tolerances;
use crate::metrics::ChartPoint;

#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub holds: bool,
    /// Worst residual over the samples.
    pub max_residual: f64,
    pub tolerance: f64,
    /// Sample attaining `max_residual`.
    pub witness: Option<ChartPoint>,
    /// True when the predicate holds only vacuously.
    pub trivial: bool,
}

impl Verdict {
    fn from_worst(worst: Option<(f64, &ChartPoint)>, tolerance: f64, trivial: bool) -> Self {
        let (max_residual, witness) = match worst {
            Some((r, p)) => (r, Some(p.clone())),
            None => (0.0, None),
        };
        Self {
            // NaN residuals never hold.
            holds: max_residual < tolerance,
            max_residual,
            tolerance,
            witness,
            trivial,
        }
    }
}

/// `(value, point)` with the largest value; NaN counts as largest.
pub(crate) fn worst_of<'a>(it: impl Iterator<Item = (f64, &'a ChartPoint)>) -> Option<(f64, &'a ChartPoint)> {
    it.fold(None, |acc: Option<(f64, &ChartPoint)>, (v, p)| match acc {
        Some((best, _)) if !(v > best || v.is_nan()) || best.is_nan() => acc,
        _ => Some((v, p)),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ScalarSummary {
    /// Mean of `r` over the samples (flat samples count as `r = 0`).
    pub r_mean: f64,
    pub r_min: f64,
    pub r_max: f64,
    pub r_stdev: f64,
    /// Samples at which the deviation tensor vanished.
    pub flat_points: usize,
    /// At least one sample, and no sample flat.
    pub nonzero_r: bool,
    /// The scalar-curvature notion only restricts `n ≥ 3`.
    pub low_dimension: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassificationReport {
    pub fixture: String,
    pub dim: usize,
    pub samples: usize,
    pub seed: u64,
    pub tolerances: Tolerances,
    pub riemannian: Verdict,
    pub berwald: Verdict,
    pub landsberg: Verdict,
    pub c_reducible: Verdict,
    pub scalar_curvature: Verdict,
    pub constant_r: Verdict,
    pub scalar: ScalarSummary,
}

impl ClassificationReport {
    pub fn verdicts(&self) -> [(&'static str, &Verdict); 6] {
        [
            ("riemannian", &self.riemannian),
            ("berwald", &self.berwald),
            ("landsberg", &self.landsberg),
            ("c_reducible", &self.c_reducible),
            ("scalar_curvature", &self.scalar_curvature),
            ("constant_r", &self.constant_r),
        ]
    }
}

pub fn classify_points(fixture: &str, dim: usize, seed: u64, points: &[PointEval], tol: Tolerances) -> ClassificationReport {
    let norm = |f: fn(&PointEval) -> f64| worst_of(points.iter().map(|e| (f(e), &e.point)));
    let riemannian = Verdict::from_worst(norm(|e| e.measures.t_norm), tol.zero, false);
    let berwald = Verdict::from_worst(norm(|e| e.measures.p_norm), tol.zero, false);
    let landsberg = Verdict::from_worst(norm(|e| e.measures.landsberg_norm), tol.zero, false);

    let c_worst = worst_of(points.iter().map(|e| {
        let m = &e.measures;
        (if m.t_norm < tol.zero { 0.0 } else { m.c_reducible_residual }, &e.point)
    }));
    let c_reducible = Verdict::from_worst(c_worst, tol.identity, points.iter().all(|e| e.measures.t_norm < tol.zero));

    let flat_points = points.iter().filter(|e| e.measures.fit.flat).count();
    let all_flat = flat_points == points.len();
    let scalar_curvature = Verdict::from_worst(norm(|e| e.measures.fit.residual), tol.identity, all_flat);

    let rs: Vec<f64> = points.iter().map(|e| e.measures.fit.r).collect();
    let count = rs.len().max(1) as f64;
    let r_mean = rs.iter().sum::<f64>() / count;
    let r_stdev = (rs.iter().map(|r| (r - r_mean).powi(2)).sum::<f64>() / count).sqrt();
    let r_min = rs.iter().copied().fold(f64::INFINITY, f64::min);
    let r_max = rs.iter().copied().fold(f64::NEG_INFINITY, f64::max);

    // The larger of the spread of r and the worst gradient; the spread is
    // attributed to the sample farthest from the mean.
    let farthest = worst_of(points.iter().map(|e| ((e.measures.fit.r - r_mean).abs(), &e.point)));
    let grad = worst_of(points.iter().map(|e| {
        let f = &e.measures.fit;
        (f.r_grad_v.max_abs().max(f.r_grad_h.max_abs()), &e.point)
    }));
    let spread = farthest.map(|(_, p)| (r_stdev, p));
    let mut constant_r = Verdict::from_worst(worst_of(spread.into_iter().chain(grad)), tol.identity, all_flat);
    constant_r.holds &= scalar_curvature.holds;

    ClassificationReport {
        fixture: fixture.to_string(),
        dim,
        samples: points.len(),
        seed,
        tolerances: tol,
        riemannian,
        berwald,
        landsberg,
        c_reducible,
        scalar_curvature,
        constant_r,
        scalar: ScalarSummary {
            r_mean,
            r_min,
            r_max,
            r_stdev,
            flat_points,
            nonzero_r: !points.is_empty() && flat_points == 0,
            low_dimension: dim < 3,
        },
    }
}
