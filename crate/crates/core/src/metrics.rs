//! Closed-form Finsler functions, chart points and seeded sampling.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{FinslerError, Result};
use crate::jets::{Jet, JetError, LiftedPoint};
use crate::tensor::{Slot, Tensor};

/// A point `(x, y)` of the slit tangent bundle in a single chart.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChartPoint {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl ChartPoint {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if x.len() != y.len() || x.is_empty() {
            return Err(FinslerError::InvalidArgument(format!(
                "x has {} coordinates, y has {}",
                x.len(),
                y.len()
            )));
        }
        if x.iter().chain(&y).any(|v| !v.is_finite()) {
            return Err(FinslerError::InvalidArgument(
                "chart coordinates must be finite".into(),
            ));
        }
        if y.iter().all(|&v| v == 0.0) {
            return Err(FinslerError::InvalidArgument(
                "y = 0 is not on the slit tangent bundle".into(),
            ));
        }
        Ok(Self { x, y })
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }

    /// Same base point, direction scaled by `lambda`.
    pub fn scaled(&self, lambda: f64) -> Self {
        Self {
            x: self.x.clone(),
            y: self.y.iter().map(|v| v * lambda).collect(),
        }
    }
}

impl fmt::Display for ChartPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[f64]| {
            v.iter()
                .map(|c| format!("{c:.6}"))
                .collect::<Vec<_>>()
                .join(", ")
        };
        write!(f, "x=[{}] y=[{}]", list(&self.x), list(&self.y))
    }
}

pub const FIXTURE_NAMES: [&str; 5] = [
    "euclidean",
    "riemann-const-k",
    "quartic-minkowski",
    "funk",
    "randers-generic",
];

pub const MAX_DIM: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq)]
enum Kind {
    Euclidean,
    RiemannConstK { k: f64 },
    QuarticMinkowski { c: f64 },
    Funk,
    Randers { sigma: f64, tau: f64, b_norm: f64 },
}

/// A named closed-form Finsler function.
///
/// The Randers fixture uses `a_ij = (1 + σ|x|²) δ_ij + τ x_i x_j` and the
/// 1-form `b = β u / ‖u‖_a` with `u = (1, x_1, …, x_{n-1})`, so `‖b‖_a = β`
/// everywhere.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricFixture {
    name: String,
    dim: usize,
    params: BTreeMap<String, f64>,
    kind: Kind,
}

fn param_error(fixture: &str, reason: impl Into<String>) -> FinslerError {
    FinslerError::InvalidParams {
        fixture: fixture.to_string(),
        reason: reason.into(),
    }
}

/// Parameter names and defaults of a named fixture.
pub fn fixture_defaults(name: &str) -> Option<&'static [(&'static str, f64)]> {
    Some(match name {
        "euclidean" | "funk" => &[],
        "riemann-const-k" => &[("k", 1.0)],
        "quartic-minkowski" => &[("c", 1.0)],
        "randers-generic" => &[("sigma", 0.3), ("tau", 0.2), ("b-norm", 0.5)],
        _ => return None,
    })
}

pub fn fixture_summary(name: &str) -> Option<&'static str> {
    Some(match name {
        "euclidean" => "L = |y|; flat Riemannian",
        "riemann-const-k" => "L = 2|y|/(1 + k|x|²); Riemannian of constant curvature k",
        "quartic-minkowski" => "L = (Σ y_i⁴ + c|y|⁴)^(1/4); locally Minkowski, Berwald, not Riemannian",
        "funk" => "Funk metric of the unit ball; Randers type, flag curvature −1/4, not Landsberg",
        "randers-generic" => "Randers metric with x-dependent a and b, ‖b‖ = b-norm",
        _ => return None,
    })
}

/// Looks up a named fixture and validates its parameters. Unspecified
/// parameters take their defaults; unknown keys are rejected.
pub fn builtin_fixture(name: &str, dim: usize, params: &BTreeMap<String, f64>) -> Result<MetricFixture> {
    let allowed = fixture_defaults(name).ok_or_else(|| FinslerError::UnknownFixture {
        name: name.to_string(),
        available: FIXTURE_NAMES.join(", "),
    })?;
    if !(2..=MAX_DIM).contains(&dim) {
        return Err(param_error(
            name,
            format!("dimension must be between 2 and {MAX_DIM}, got {dim}"),
        ));
    }
    let mut resolved = BTreeMap::new();
    for (key, value) in params {
        if !allowed.iter().any(|(k, _)| k == key) {
            let known: Vec<_> = allowed.iter().map(|(k, _)| *k).collect();
            return Err(param_error(
                name,
                if known.is_empty() {
                    format!("takes no parameters, got `{key}`")
                } else {
                    format!("unknown parameter `{key}` (expected one of {})", known.join(", "))
                },
            ));
        }
        if !value.is_finite() {
            return Err(param_error(name, format!("{key} must be finite")));
        }
        resolved.insert(key.clone(), *value);
    }
    for (key, default) in allowed {
        resolved.entry(key.to_string()).or_insert(*default);
    }
    let p = |k: &str| resolved[k];
    let kind = match name {
        "euclidean" => Kind::Euclidean,
        "funk" => Kind::Funk,
        "riemann-const-k" => Kind::RiemannConstK { k: p("k") },
        "quartic-minkowski" => {
            if p("c") < 0.0 {
                return Err(param_error(name, "c must be non-negative"));
            }
            Kind::QuarticMinkowski { c: p("c") }
        }
        "randers-generic" => {
            let (sigma, tau, b_norm) = (p("sigma"), p("tau"), p("b-norm"));
            if sigma < 0.0 || tau < 0.0 {
                return Err(param_error(name, "sigma and tau must be non-negative"));
            }
            if !(0.0..1.0).contains(&b_norm) {
                return Err(param_error(name, "b-norm must lie in [0, 1)"));
            }
            Kind::Randers { sigma, tau, b_norm }
        }
        _ => unreachable!(),
    };
    Ok(MetricFixture {
        name: name.to_string(),
        dim,
        params: resolved,
        kind,
    })
}

fn dot(a: &[Jet], b: &[Jet]) -> Jet {
    let mut acc = &a[0] * &b[0];
    for (u, v) in a.iter().zip(b).skip(1) {
        acc += u * v;
    }
    acc
}

impl MetricFixture {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn params(&self) -> &BTreeMap<String, f64> {
        &self.params
    }

    /// Locally Minkowski fixtures have an `x`-independent Finsler function.
    pub fn is_x_independent(&self) -> bool {
        matches!(self.kind, Kind::Euclidean | Kind::QuarticMinkowski { .. })
    }

    /// Default sampling box for every `x` coordinate, chosen well inside the
    /// domain.
    pub fn default_x_box(&self) -> (f64, f64) {
        match self.kind {
            Kind::Euclidean | Kind::QuarticMinkowski { .. } => (-1.0, 1.0),
            Kind::RiemannConstK { .. } | Kind::Randers { .. } => (-0.5, 0.5),
            Kind::Funk => (-0.4, 0.4),
        }
    }

    pub fn in_domain(&self, p: &ChartPoint) -> bool {
        if p.dim() != self.dim || p.y.iter().all(|&v| v == 0.0) {
            return false;
        }
        let x2: f64 = p.x.iter().map(|v| v * v).sum();
        match self.kind {
            Kind::RiemannConstK { k } => 1.0 + k * x2 > 0.0,
            Kind::Funk => x2 < 1.0,
            _ => true,
        }
    }

    fn check_point(&self, p: &ChartPoint) -> Result<()> {
        if self.in_domain(p) {
            Ok(())
        } else {
            Err(FinslerError::OutsideDomain {
                fixture: self.name.clone(),
                point: p.clone(),
            })
        }
    }

    /// Evaluates `L` on jet-valued coordinates.
    pub fn finsler_jet(&self, x: &[Jet], y: &[Jet]) -> Result<Jet, JetError> {
        match self.kind {
            Kind::Euclidean => dot(y, y).sqrt().map_err(|e| e.in_expr("sqrt(|y|^2)")),
            Kind::RiemannConstK { k } => {
                let conf = dot(x, x) * k + 1.0;
                let norm = dot(y, y).sqrt().map_err(|e| e.in_expr("sqrt(|y|^2)"))?;
                (norm * 2.0)
                    .checked_div(&conf)
                    .map_err(|e| e.in_expr("1 + k|x|^2"))
            }
            Kind::QuarticMinkowski { c } => {
                let y2 = dot(y, y);
                let mut quartic = &y2 * &y2 * c;
                for yi in y {
                    let s = yi * yi;
                    quartic += &s * &s;
                }
                quartic
                    .powf(0.25)
                    .map_err(|e| e.in_expr("(sum y^4 + c |y|^4)^(1/4)"))
            }
            Kind::Funk => {
                let a = 1.0 - &dot(x, x);
                let xy = dot(x, y);
                let q = &a * &dot(y, y) + &xy * &xy;
                let root = q
                    .sqrt()
                    .map_err(|e| e.in_expr("sqrt((1-|x|^2)|y|^2 + <x,y>^2)"))?;
                (root + &xy)
                    .checked_div(&a)
                    .map_err(|e| e.in_expr("1 - |x|^2"))
            }
            Kind::Randers { sigma, tau, b_norm } => {
                let x2 = dot(x, x);
                let s = &x2 * sigma + 1.0;
                let xy = dot(x, y);
                let alpha2 = &s * &dot(y, y) + &(&xy * &xy) * tau;
                let alpha = alpha2.sqrt().map_err(|e| e.in_expr("sqrt(a(y, y))"))?;
                // u = (1, x_1, ..., x_{n-1}); ‖u‖_a² from Sherman–Morrison.
                let n = x.len();
                let one = x[0].constant_like(1.0);
                let u: Vec<Jet> = std::iter::once(one).chain(x[..n - 1].iter().cloned()).collect();
                let xu = dot(x, &u);
                let denom = &s + &(&x2 * tau);
                let shrink = (&xu * &xu * tau).checked_div(&denom)?;
                let u_norm2 = (dot(&u, &u) - shrink).checked_div(&s)?;
                let u_norm = u_norm2.sqrt().map_err(|e| e.in_expr("|u|_a"))?;
                let beta = dot(&u, y).checked_div(&u_norm)? * b_norm;
                Ok(alpha + beta)
            }
        }
    }

    /// `L(x, y)` at a point.
    pub fn finsler_value(&self, p: &ChartPoint) -> Result<f64> {
        self.check_point(p)?;
        let lp = LiftedPoint::new(p, 0);
        Ok(self.finsler_jet(&lp.x, &lp.y)?.value())
    }

    /// Fundamental tensor `g_ij = ½ ∂²(L²)/∂y^i∂y^j` at a point, without the
    /// degeneracy guard.
    pub fn fundamental_tensor_raw(&self, p: &ChartPoint) -> Result<Tensor> {
        self.check_point(p)?;
        let n = self.dim;
        let lp = LiftedPoint::new(p, 2);
        let l = self.finsler_jet(&lp.x, &lp.y)?;
        let f = &l * &l;
        let dy: Vec<Jet> = (0..n).map(|i| f.diff(n + i)).collect();
        Ok(Tensor::from_fn(n, &[Slot::Down; 2], |ix| {
            0.5 * dy[ix[0]].diff(n + ix[1]).value()
        }))
    }
}

/// Eigenvalue summary of a symmetric matrix given as a rank-2 tensor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Spectrum {
    pub min: f64,
    pub max: f64,
}

impl Spectrum {
    pub fn of(g: &Tensor) -> Self {
        let n = g.dim();
        let m = DMatrix::from_fn(n, n, |i, j| 0.5 * (g.get(&[i, j]) + g.get(&[j, i])));
        let eig = SymmetricEigen::new(m).eigenvalues;
        Self {
            min: eig.iter().copied().fold(f64::INFINITY, f64::min),
            max: eig.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        }
    }

    pub fn condition(&self) -> f64 {
        if self.min <= 0.0 {
            f64::INFINITY
        } else {
            self.max / self.min
        }
    }
}

/// Condition-number ceiling for the fundamental tensor.
pub const MAX_CONDITION: f64 = 1e12;

/// Rejects a fundamental tensor that is not numerically positive definite.
pub fn guard_metric(g: &Tensor, p: &ChartPoint) -> Result<Spectrum> {
    let s = Spectrum::of(g);
    if !(s.min > 0.0) || s.condition() > MAX_CONDITION {
        return Err(FinslerError::DegenerateMetric {
            point: p.clone(),
            reason: format!(
                "eigenvalues in [{:e}, {:e}], condition number {:e}",
                s.min,
                s.max,
                s.condition()
            ),
        });
    }
    Ok(s)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleSpec {
    pub count: usize,
    pub seed: u64,
    /// Interval for every `x` coordinate; `None` uses the fixture default.
    pub x_box: Option<(f64, f64)>,
    /// Euclidean norm of the sampled `y`.
    pub y_norm: f64,
    /// Total draws allowed before giving up.
    pub max_tries: usize,
}

impl SampleSpec {
    pub fn new(count: usize, seed: u64) -> Self {
        Self {
            count,
            seed,
            x_box: None,
            y_norm: 1.0,
            max_tries: 1000 * count.max(1),
        }
    }

    pub fn with_x_box(mut self, lo: f64, hi: f64) -> Self {
        self.x_box = Some((lo, hi));
        self
    }
}

/// Deterministic seeded sample of chart points inside the fixture domain.
/// `x` is uniform in the box; `y` is uniform on the sphere of radius
/// `y_norm`.
pub fn sample_points(f: &MetricFixture, s: &SampleSpec) -> Result<Vec<ChartPoint>> {
    if s.count == 0 {
        return Err(FinslerError::InvalidArgument("sample count must be at least 1".into()));
    }
    let (lo, hi) = s.x_box.unwrap_or_else(|| f.default_x_box());
    if !(lo <= hi) || !(s.y_norm > 0.0) {
        return Err(FinslerError::InvalidArgument(
            "x-box must be ordered and y-norm positive".into(),
        ));
    }
    let n = f.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
    let mut out = Vec::with_capacity(s.count);
    let mut tries = 0;
    while out.len() < s.count {
        if tries >= s.max_tries {
            return Err(FinslerError::SamplingExhausted {
                tries,
                accepted: out.len(),
                requested: s.count,
            });
        }
        tries += 1;
        let x: Vec<f64> = (0..n)
            .map(|_| if lo == hi { lo } else { rng.random_range(lo..hi) })
            .collect();
        let mut y: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm < 1e-8 {
            continue;
        }
        y.iter_mut().for_each(|v| *v *= s.y_norm / norm);
        let p = ChartPoint { x, y };
        if f.in_domain(&p) {
            out.push(p);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub fixture: String,
    pub points_checked: usize,
    pub max_homogeneity_error: f64,
    pub min_eigenvalue: f64,
    pub max_condition: f64,
}

pub const HOMOGENEITY_TOL: f64 = 1e-10;

/// Checks positive 1-homogeneity of `L` and positive definiteness of `g` on
/// the samples, plus coordinate-axis directions at the box centre.
pub fn validate_fixture(f: &MetricFixture, s: &SampleSpec) -> Result<ValidationReport> {
    let mut points = sample_points(f, s)?;
    let (lo, hi) = s.x_box.unwrap_or_else(|| f.default_x_box());
    let centre = vec![0.5 * (lo + hi); f.dim()];
    for i in 0..f.dim() {
        for sign in [1.0, -1.0] {
            let mut y = vec![0.0; f.dim()];
            y[i] = sign * s.y_norm;
            let p = ChartPoint {
                x: centre.clone(),
                y,
            };
            if f.in_domain(&p) {
                points.push(p);
            }
        }
    }
    let invalid = |reason: String, p: &ChartPoint| FinslerError::FixtureInvalid {
        fixture: f.name().to_string(),
        reason,
        witness: p.clone(),
    };
    let mut report = ValidationReport {
        fixture: f.name().to_string(),
        points_checked: points.len(),
        max_homogeneity_error: 0.0,
        min_eigenvalue: f64::INFINITY,
        max_condition: 0.0,
    };
    for p in &points {
        let l = f.finsler_value(p)?;
        if !(l > 0.0) {
            return Err(invalid(format!("L = {l} is not positive"), p));
        }
        for lambda in [0.5, 2.0, 3.0] {
            let scaled = f.finsler_value(&p.scaled(lambda))?;
            let err = (scaled - lambda * l).abs() / (lambda * l);
            report.max_homogeneity_error = report.max_homogeneity_error.max(err);
            if err > HOMOGENEITY_TOL {
                return Err(invalid(
                    format!("L(x, {lambda} y) differs from {lambda} L(x, y) by {err:e} (relative)"),
                    p,
                ));
            }
        }
        let g = match f.fundamental_tensor_raw(p) {
            Ok(g) => g,
            Err(FinslerError::Jet(e)) => {
                return Err(invalid(format!("fundamental tensor undefined: {e}"), p))
            }
            Err(e) => return Err(e),
        };
        let spec = Spectrum::of(&g);
        report.min_eigenvalue = report.min_eigenvalue.min(spec.min);
        report.max_condition = report.max_condition.max(spec.condition());
        if guard_metric(&g, p).is_err() {
            return Err(invalid(
                format!(
                    "fundamental tensor not positive definite (eigenvalues in [{:e}, {:e}])",
                    spec.min, spec.max
                ),
                p,
            ));
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fixture(name: &str, dim: usize, params: &[(&str, f64)]) -> MetricFixture {
        let map = params.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        builtin_fixture(name, dim, &map).unwrap()
    }

    fn pt(x: &[f64], y: &[f64]) -> ChartPoint {
        ChartPoint::new(x.to_vec(), y.to_vec()).unwrap()
    }

    #[test]
    fn closed_form_values() {
        let e = fixture("euclidean", 3, &[]);
        assert_eq!(e.finsler_value(&pt(&[0.0; 3], &[3.0, 4.0, 0.0])).unwrap(), 5.0);
        let funk = fixture("funk", 2, &[]);
        assert_eq!(funk.finsler_value(&pt(&[0.0, 0.0], &[1.0, 0.0])).unwrap(), 1.0);
        let q = fixture("quartic-minkowski", 2, &[("c", 1.0)]);
        let v = q.finsler_value(&pt(&[0.0, 0.0], &[1.0, 1.0])).unwrap();
        assert!((v - 6f64.powf(0.25)).abs() < 1e-15);
        let r = fixture("riemann-const-k", 2, &[("k", 1.0)]);
        let v = r.finsler_value(&pt(&[1.0, 0.0], &[0.0, 1.0])).unwrap();
        assert!((v - 1.0).abs() < 1e-15);
    }

    #[test]
    fn randers_form_norm_is_b_norm() {
        // With y = a^{-1} b direction the drift term equals β α(y); check the
        // cheaper identity at x = 0 where a = I and b = β e_1.
        let f = fixture("randers-generic", 3, &[("b-norm", 0.4)]);
        let v = f.finsler_value(&pt(&[0.0; 3], &[1.0, 0.0, 0.0])).unwrap();
        assert!((v - 1.4).abs() < 1e-15);
        let v = f.finsler_value(&pt(&[0.0; 3], &[-1.0, 0.0, 0.0])).unwrap();
        assert!((v - 0.6).abs() < 1e-15);
    }

    #[test]
    fn parameter_validation() {
        let none = BTreeMap::new();
        assert!(matches!(
            builtin_fixture("nosuch", 3, &none),
            Err(FinslerError::UnknownFixture { .. })
        ));
        let mut bad = BTreeMap::new();
        bad.insert("b-norm".to_string(), 1.0);
        assert!(matches!(
            builtin_fixture("randers-generic", 3, &bad),
            Err(FinslerError::InvalidParams { .. })
        ));
        let mut c = BTreeMap::new();
        c.insert("c".to_string(), -0.5);
        assert!(builtin_fixture("quartic-minkowski", 2, &c).is_err());
        let mut stray = BTreeMap::new();
        stray.insert("k".to_string(), 1.0);
        assert!(builtin_fixture("funk", 2, &stray).is_err());
        assert!(builtin_fixture("euclidean", 1, &none).is_err());
    }

    #[test]
    fn domain_violation_is_reported() {
        let funk = fixture("funk", 2, &[]);
        let outside = pt(&[0.8, 0.8], &[1.0, 0.0]);
        assert!(matches!(
            funk.finsler_value(&outside),
            Err(FinslerError::OutsideDomain { .. })
        ));
    }

    #[test]
    fn sampling_is_deterministic_and_in_domain() {
        let e = fixture("euclidean", 3, &[]);
        let s = SampleSpec::new(10, 7);
        let a = sample_points(&e, &s).unwrap();
        assert_eq!(a.len(), 10);
        assert_eq!(a, sample_points(&e, &s).unwrap());
        let funk = fixture("funk", 2, &[]);
        let pts = sample_points(&funk, &SampleSpec::new(40, 3).with_x_box(-0.9, 0.9)).unwrap();
        assert!(pts.iter().all(|p| p.x.iter().map(|v| v * v).sum::<f64>() < 1.0));
    }

    #[test]
    fn exhausted_rejection_budget() {
        let r = fixture("riemann-const-k", 2, &[("k", -10.0)]);
        let mut s = SampleSpec::new(5, 1).with_x_box(2.0, 3.0);
        s.max_tries = 50;
        assert!(matches!(
            sample_points(&r, &s),
            Err(FinslerError::SamplingExhausted { .. })
        ));
    }

    #[test]
    fn validation_outcomes() {
        let e = fixture("euclidean", 3, &[]);
        let rep = validate_fixture(&e, &SampleSpec::new(10, 1)).unwrap();
        assert!((rep.min_eigenvalue - 1.0).abs() < 1e-12);

        let degenerate = fixture("quartic-minkowski", 3, &[("c", 0.0)]);
        match validate_fixture(&degenerate, &SampleSpec::new(10, 1)) {
            Err(FinslerError::FixtureInvalid { witness, .. }) => {
                assert_eq!(witness.y.iter().filter(|&&v| v != 0.0).count(), 1);
            }
            other => panic!("expected rejection, got {other:?}"),
        }

        let edge = fixture("randers-generic", 3, &[("b-norm", 0.99)]);
        assert!(validate_fixture(&edge, &SampleSpec::new(20, 2)).is_ok());
    }
}
