//! The Landsberg/scalar-curvature pipeline: check the hypothesis legs, and
//! when they all hold, assert the conclusion and run the identity chain that
//! leads to it.

use serde::Serialize;

use super::classify::ClassificationReport;
use super::identities::IdentityId::{self, *};
use super::suite::{evaluate_identities, IdentityOutcome, Status};
use super::{evaluate_samples, Tolerances};
use crate::error::{FinslerError, Result};
use crate::metrics::{validate_fixture, MetricFixture, SampleSpec};

/// The chain in the order it is used: Landsberg with `r ≠ 0` gives
/// C-reducibility, C-reducible Landsberg gives Berwald or Riemannian, and
/// Berwald with `r ≠ 0` gives Riemannian of constant curvature.
pub const CHAIN: &[IdentityId] = &[
    HvDerivativeScalarForm,
    HvDerivativeScalarFormEta,
    LandsbergCartanForm,
    LandsbergRGradient,
    LandsbergHorizontalSymmetry,
    LandsbergHorizontalCSymmetry,
    CartanVCurvatureParallel,
    CHorizontalProportionality,
    DimensionContraction,
    CReducibleVerticalC,
    CReduciblePsi,
    BerwaldCQuadratic,
    RiemannianEndState,
    RVerticallyParallel,
    VhTorsionConstantForm,
    VhTorsionCyclic,
    RHorizontalGradientRadial,
    RHorizontallyParallel,
];

#[derive(Debug, Clone, Serialize)]
pub struct Hypothesis {
    pub landsberg: bool,
    pub scalar_curvature: bool,
    pub nonzero_r: bool,
    pub holds: bool,
    /// One line per failed leg.
    pub failed_legs: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Conclusion {
    pub riemannian: bool,
    pub constant_r: bool,
    pub r: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct NumataReport {
    pub classification: ClassificationReport,
    pub hypothesis: Hypothesis,
    /// Present only when the hypothesis holds.
    pub conclusion: Option<Conclusion>,
    pub chain: Vec<IdentityOutcome>,
    pub chain_max_residual: Option<f64>,
    pub summary: String,
}

pub fn hypothesis(c: &ClassificationReport) -> Hypothesis {
    let mut failed_legs = Vec::new();
    if !c.landsberg.holds {
        failed_legs.push(format!(
            "not Landsberg: max |Landsberg tensor| = {:.3e} ≥ {:.1e}",
            c.landsberg.max_residual, c.landsberg.tolerance
        ));
    }
    if !c.scalar_curvature.holds {
        failed_legs.push(format!(
            "not of scalar curvature: max fit residual = {:.3e} ≥ {:.1e}",
            c.scalar_curvature.max_residual, c.scalar_curvature.tolerance
        ));
    }
    if !c.scalar.nonzero_r {
        failed_legs.push(format!(
            "r = 0: the deviation tensor vanishes at {} of {} samples, and the hypothesis requires r nowhere zero",
            c.scalar.flat_points, c.samples
        ));
    }
    Hypothesis {
        landsberg: c.landsberg.holds,
        scalar_curvature: c.scalar_curvature.holds,
        nonzero_r: c.scalar.nonzero_r,
        holds: failed_legs.is_empty(),
        failed_legs,
    }
}

pub fn numata_pipeline(
    f: &MetricFixture,
    spec: &SampleSpec,
    tol: Tolerances,
    threads: Option<usize>,
) -> Result<NumataReport> {
    if f.dim() < 3 {
        return Err(FinslerError::Refused(format!(
            "the Landsberg/scalar-curvature rigidity statement requires dimension n ≥ 3, got n = {}",
            f.dim()
        )));
    }
    validate_fixture(f, spec)?;
    let points = evaluate_samples(f, spec, threads)?;
    let classification = super::classify::classify_points(f.name(), f.dim(), spec.seed, &points, tol);
    let hyp = hypothesis(&classification);
    if !hyp.holds {
        let summary = format!("hypothesis fails ({}); conclusion not asserted", hyp.failed_legs.join("; "));
        return Ok(NumataReport {
            classification,
            hypothesis: hyp,
            conclusion: None,
            chain: Vec::new(),
            chain_max_residual: None,
            summary,
        });
    }
    let chain = evaluate_identities(CHAIN, &points, &classification);
    let chain_max_residual = chain.iter().filter_map(|o| o.max_residual).reduce(f64::max);
    let conclusion = Conclusion {
        riemannian: classification.riemannian.holds,
        constant_r: classification.constant_r.holds,
        r: classification.scalar.r_mean,
        holds: classification.riemannian.holds && classification.constant_r.holds,
    };
    let chain_ok = chain.iter().all(|o| o.status == Status::Pass);
    let summary = match (conclusion.holds, chain_ok) {
        (true, true) => format!(
            "hypothesis holds; conclusion holds: Riemannian of constant curvature r = {:.6}",
            conclusion.r
        ),
        (true, false) => "hypothesis holds; conclusion holds, but some chain identities did not pass".into(),
        (false, _) => "hypothesis holds but the conclusion fails: counterexample candidate".into(),
    };
    Ok(NumataReport {
        classification,
        hypothesis: hyp,
        conclusion: Some(conclusion),
        chain,
        chain_max_residual,
        summary,
    })
}
