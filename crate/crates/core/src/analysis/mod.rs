//! Scalar-curvature extraction, auxiliary tensors, classification
//! predicates, the identity suite, and the rigidity pipeline.

pub mod checks;
pub mod classify;
pub mod identities;
pub mod numata;
pub mod point;
pub mod scalar;
pub mod suite;

use rayon::prelude::*;
use serde::Serialize;

use crate::connections::{horizontal_derivative, Connection};
use crate::curvatures::PointGeometry;
use crate::error::{FinslerError, Result};
use crate::metrics::{sample_points, validate_fixture, ChartPoint, MetricFixture, SampleSpec};
use crate::tensor::Tensor;

pub use checks::{c_reducibility, mu_from_pair, proportionality_to_hbar, CReducibility, Frame};
pub use classify::{classify_points, ClassificationReport, ScalarSummary, Verdict};
pub use identities::{Gate, IdentityId};
pub use numata::{numata_pipeline, Conclusion, Hypothesis, NumataReport};
pub use point::{evaluate_point, PointEval, PointMeasures};
pub use scalar::{extract_scalar_curvature, ScalarCurvatureFit, ScalarJets, FLAT_FLOOR};
pub use suite::{evaluate_identities, evaluate_identity, IdentityOutcome, Status};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    /// Bound on identity residuals and relative fits.
    pub identity: f64,
    /// Bound on norms that should vanish.
    pub zero: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            identity: 1e-6,
            zero: 1e-7,
        }
    }
}

impl Tolerances {
    pub fn new(identity: f64, zero: f64) -> Result<Self> {
        for (name, v) in [("identity", identity), ("zero", zero)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(FinslerError::InvalidArgument(format!(
                    "{name} tolerance must be positive and finite, got {v}"
                )));
            }
        }
        Ok(Self { identity, zero })
    }
}

/// Evaluates every sample point, in parallel when `threads` is not 1. The
/// result order, and hence every report built from it, does not depend on
/// the thread count.
pub fn evaluate_samples(f: &MetricFixture, spec: &SampleSpec, threads: Option<usize>) -> Result<Vec<PointEval>> {
    let points = sample_points(f, spec)?;
    let run = || -> Vec<Result<PointEval>> { points.par_iter().map(|p| evaluate_point(f, p)).collect() };
    let results = match threads {
        Some(0) => return Err(FinslerError::InvalidArgument("thread count must be at least 1".into())),
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| FinslerError::InvalidArgument(format!("cannot build thread pool: {e}")))?
            .install(run),
        None => run(),
    };
    results.into_iter().collect()
}

pub fn classify(f: &MetricFixture, spec: &SampleSpec, tol: Tolerances, threads: Option<usize>) -> Result<ClassificationReport> {
    validate_fixture(f, spec)?;
    let points = evaluate_samples(f, spec, threads)?;
    Ok(classify_points(f.name(), f.dim(), spec.seed, &points, tol))
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub classification: ClassificationReport,
    pub identities: Vec<IdentityOutcome>,
}

impl VerificationReport {
    pub fn failures(&self) -> impl Iterator<Item = &IdentityOutcome> {
        self.identities.iter().filter(|o| o.status == Status::Fail)
    }

    pub fn all_pass(&self) -> bool {
        self.failures().next().is_none()
    }

    pub fn outcome(&self, id: IdentityId) -> Option<&IdentityOutcome> {
        self.identities.iter().find(|o| o.id == id)
    }
}

/// Runs every registered identity on the fixture's sample set.
pub fn verify(f: &MetricFixture, spec: &SampleSpec, tol: Tolerances, threads: Option<usize>) -> Result<VerificationReport> {
    validate_fixture(f, spec)?;
    let points = evaluate_samples(f, spec, threads)?;
    let classification = classify_points(f.name(), f.dim(), spec.seed, &points, tol);
    let identities = evaluate_identities(IdentityId::ALL, &points, &classification);
    Ok(VerificationReport {
        classification,
        identities,
    })
}

/// The identities gated on Berwald with non-zero scalar curvature, run over
/// a sample set.
pub fn check_berwald_scalar_chain(
    f: &MetricFixture,
    spec: &SampleSpec,
    tol: Tolerances,
    threads: Option<usize>,
) -> Result<Vec<IdentityOutcome>> {
    let ids: Vec<IdentityId> = IdentityId::ALL
        .iter()
        .copied()
        .filter(|id| id.gate() == Gate::BerwaldScalar)
        .collect();
    let points = evaluate_samples(f, spec, threads)?;
    let c = classify_points(f.name(), f.dim(), spec.seed, &points, tol);
    Ok(evaluate_identities(&ids, &points, &c))
}

/// Evaluates the given identities at a single point, with the hypotheses
/// judged at that point alone.
pub fn check_at_point(f: &MetricFixture, p: &ChartPoint, ids: &[IdentityId], tol: Tolerances) -> Result<Vec<IdentityOutcome>> {
    let e = evaluate_point(f, p)?;
    let points = std::slice::from_ref(&e);
    let c = classify_points(f.name(), f.dim(), 0, points, tol);
    Ok(evaluate_identities(ids, points, &c))
}

fn single(f: &MetricFixture, p: &ChartPoint, id: IdentityId) -> Result<IdentityOutcome> {
    Ok(check_at_point(f, p, &[id], Tolerances::default())?.remove(0))
}

/// `R°` against its scalar-curvature form in terms of `A`, `B`, `ħ`, `φ`.
pub fn check_h_curvature_scalar_form(f: &MetricFixture, p: &ChartPoint) -> Result<IdentityOutcome> {
    single(f, p, IdentityId::HCurvatureScalarForm)
}

/// `R̂` against `B(X)φ(Y) − B(Y)φ(X)`.
pub fn check_vh_torsion_scalar_form(f: &MetricFixture, p: &ChartPoint) -> Result<IdentityOutcome> {
    single(f, p, IdentityId::VhTorsionScalarForm)
}

/// The expansion of `D°_βη 𝐏°` and its `Z = η` specialisation.
pub fn check_hv_derivative_scalar_form(f: &MetricFixture, p: &ChartPoint) -> Result<[IdentityOutcome; 2]> {
    let mut v = check_at_point(
        f,
        p,
        &[IdentityId::HvDerivativeScalarForm, IdentityId::HvDerivativeScalarFormEta],
        Tolerances::default(),
    )?;
    let eta = v.pop().expect("two outcomes");
    Ok([v.pop().expect("two outcomes"), eta])
}

/// Residual of the C-reducible form, with the vacuous case flagged.
pub fn is_c_reducible(f: &MetricFixture, p: &ChartPoint, tol: Tolerances) -> Result<(bool, CReducibility)> {
    let fj = crate::fundamentals::FundamentalJets::at(f, p, 3)?;
    let cr = c_reducibility(&fj.t.value(), &fj.hbar.value(), &fj.c.value(), tol.zero);
    Ok((cr.trivial || cr.residual < tol.identity, cr))
}

/// `α` and the residual of `L∇_γC + ℓ⊗C + C⊗ℓ = αħ`.
pub fn check_c_reducible_proportionality(f: &MetricFixture, p: &ChartPoint) -> Result<(f64, IdentityOutcome)> {
    let e = evaluate_point(f, p)?;
    let alpha = e.measures.alpha;
    let c = classify_points(f.name(), f.dim(), 0, std::slice::from_ref(&e), Tolerances::default());
    Ok((alpha, evaluate_identity(IdentityId::CReducibleProportionality, std::slice::from_ref(&e), &c)))
}

/// The Cartan tensor and `D°_γr` of a Landsberg space with `r ≠ 0`.
pub fn check_landsberg_scalar(f: &MetricFixture, p: &ChartPoint) -> Result<Vec<IdentityOutcome>> {
    check_at_point(
        f,
        p,
        &[IdentityId::LandsbergCartanForm, IdentityId::LandsbergRGradient],
        Tolerances::default(),
    )
}

/// `μ` from `∇_βC̄ = μφ` and the dimension contraction `(n−2)μC = 0`.
pub fn check_c_horizontal_proportionality(f: &MetricFixture, p: &ChartPoint) -> Result<(f64, Vec<IdentityOutcome>)> {
    let e = evaluate_point(f, p)?;
    let c = classify_points(f.name(), f.dim(), 0, std::slice::from_ref(&e), Tolerances::default());
    let outcomes = evaluate_identities(
        &[IdentityId::CHorizontalProportionality, IdentityId::DimensionContraction],
        std::slice::from_ref(&e),
        &c,
    );
    Ok((e.measures.mu, outcomes))
}

#[derive(Debug, Clone, Serialize)]
pub struct AuxTensors {
    #[serde(rename = "A")]
    pub a: Tensor,
    #[serde(rename = "B")]
    pub b: Tensor,
    #[serde(rename = "M")]
    pub m: Tensor,
    /// `𝔸(X,W) = (∇_γX C)(W) + L⁻¹{ℓ(X)C(W) + ℓ(W)C(X)}`
    pub a_bb: Tensor,
    /// `α = f L / (n − 1)`
    pub alpha: f64,
    /// `μ = σ / (n − 1)`
    pub mu: f64,
    /// `ψ = L C² / (n + 1) + α`
    pub psi: f64,
    /// `σ = g^{XZ} (∇_βZ C)(X)`
    pub sigma: f64,
    /// `f = g^{XW} 𝔸(X,W)`
    pub f: f64,
}

/// Jet order for [`aux_tensors`]: two `y`-derivatives of `r`.
const AUX_ORDER: usize = 6;

pub fn aux_tensors(f: &MetricFixture, p: &ChartPoint, fit: &ScalarCurvatureFit) -> Result<AuxTensors> {
    let tol = Tolerances::default();
    if fit.flat {
        return Err(FinslerError::Refused("deviation tensor vanishes: no scalar curvature to expand".into()));
    }
    if !(fit.residual < tol.identity) {
        return Err(FinslerError::Refused(format!(
            "not of scalar curvature at {p}: fit residual {:.3e}",
            fit.residual
        )));
    }
    let pg = PointGeometry::new(f, p, AUX_ORDER)?;
    let n = pg.dim();
    let fr = point::frame(&pg.fund, &p.y);
    let sj = ScalarJets::compute(&pg)?;
    let (r, dr, ddr) = (sj.r.value(), sj.dr.value(), sj.ddr.value());
    let cm = &pg.fund.cartan_mixed;
    let nabla_v_c = crate::connections::vertical_derivative(&pg.fund.c, Connection::Cartan, cm).value();
    let a_bb = checks::aux_a_bb(&fr, &nabla_v_c);
    let trace = |t: &Tensor, transpose: bool| -> f64 {
        (0..n * n)
            .map(|k| {
                let (i, j) = (k / n, k % n);
                let v = if transpose { t.get(&[j, i]) } else { t.get(&[i, j]) };
                fr.g_inv.get(&[i, j]) * v
            })
            .sum()
    };
    let f_trace = trace(&a_bb, false);
    let h_c = horizontal_derivative(&pg.fund.c, Connection::Cartan, &pg.conn).value();
    let sigma = trace(&h_c, true);
    let nm1 = n as f64 - 1.0;
    let alpha = f_trace * fr.l / nm1;
    Ok(AuxTensors {
        a: checks::aux_a(&fr, r, &dr, &ddr),
        b: checks::aux_b(&fr, r, &dr),
        m: checks::aux_m(&fr, &dr, &ddr),
        a_bb,
        alpha,
        mu: sigma / nm1,
        psi: checks::psi(&fr, alpha),
        sigma,
        f: f_trace,
    })
}
