//! Identity outcomes over a sample set, with hypothesis gating.

use serde::Serialize;

use super::classify::{worst_of, ClassificationReport};
use super::identities::{Gate, IdentityId};
use super::point::PointEval;
use crate::metrics::ChartPoint;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// The hypothesis holds but has no content on this fixture (for example
    /// `r = 0` everywhere), so nothing was checked.
    Vacuous,
    /// The fixture does not satisfy the hypothesis.
    Refused,
}

#[derive(Debug, Clone, Serialize)]
pub struct IdentityOutcome {
    pub id: IdentityId,
    pub statement: &'static str,
    pub gate: Gate,
    pub status: Status,
    pub max_residual: Option<f64>,
    pub tolerance: f64,
    pub witness: Option<ChartPoint>,
    /// Number of samples that contributed a residual.
    pub points: usize,
    /// Both sides vanish identically on this fixture.
    pub trivial: bool,
    pub note: Option<String>,
}

const NO_NONTRIVIAL_INSTANCE: &str =
    "holds only in the Riemannian case here; no non-Riemannian fixture satisfies this hypothesis";

fn refuse<T>(leg: &str, c: &ClassificationReport) -> Result<T, (Status, String)> {
    let note = match c.verdicts().into_iter().find(|(name, _)| *name == leg) {
        Some((_, v)) => format!("hypothesis fails: not {leg} (max residual {:.3e} ≥ {:.1e})", v.max_residual, v.tolerance),
        None => format!("hypothesis fails: {leg}"),
    };
    Err((Status::Refused, note))
}

/// `Err(reason)` when the gate refuses, `Ok(trivial_note)` otherwise.
fn gate_check(gate: Gate, c: &ClassificationReport) -> Result<Option<&'static str>, (Status, String)> {
    let need_scalar = |c: &ClassificationReport| -> Result<(), (Status, String)> {
        if !c.scalar_curvature.holds {
            return refuse("scalar_curvature", c);
        }
        if !c.scalar.nonzero_r {
            return Err((
                Status::Refused,
                format!("hypothesis fails: r = 0 at {} of {} samples", c.scalar.flat_points, c.samples),
            ));
        }
        Ok(())
    };
    let low_dim = || {
        Err((
            Status::Refused,
            format!("hypothesis fails: requires dimension at least 3, got {}", c.dim),
        ))
    };
    let trivial = if c.riemannian.holds { Some(NO_NONTRIVIAL_INSTANCE) } else { None };
    match gate {
        Gate::Always => Ok(None),
        Gate::Scalar => {
            if !c.scalar_curvature.holds {
                return refuse("scalar_curvature", c);
            }
            if c.scalar.flat_points == c.samples {
                return Err((Status::Vacuous, "deviation tensor vanishes at every sample (r = 0)".into()));
            }
            Ok(None)
        }
        Gate::CReducible => {
            if !c.c_reducible.holds {
                return refuse("c_reducible", c);
            }
            Ok(if c.c_reducible.trivial { Some("Cartan tensor vanishes") } else { None })
        }
        Gate::Landsberg => {
            if !c.landsberg.holds {
                return refuse("landsberg", c);
            }
            Ok(if c.riemannian.holds { Some("Cartan tensor vanishes") } else { None })
        }
        Gate::LandsbergScalar => {
            if !c.landsberg.holds {
                return refuse("landsberg", c);
            }
            need_scalar(c)?;
            Ok(trivial)
        }
        Gate::LandsbergCReducible => {
            if c.dim < 3 {
                return low_dim();
            }
            if !c.landsberg.holds {
                return refuse("landsberg", c);
            }
            if !c.c_reducible.holds {
                return refuse("c_reducible", c);
            }
            Ok(trivial)
        }
        Gate::BerwaldScalar => {
            if c.dim < 3 {
                return low_dim();
            }
            if !c.berwald.holds {
                return refuse("berwald", c);
            }
            need_scalar(c)?;
            Ok(trivial)
        }
    }
}

pub fn evaluate_identity(id: IdentityId, points: &[PointEval], c: &ClassificationReport) -> IdentityOutcome {
    let tolerance = c.tolerances.identity;
    let mut outcome = IdentityOutcome {
        id,
        statement: id.statement(),
        gate: id.gate(),
        status: Status::Refused,
        max_residual: None,
        tolerance,
        witness: None,
        points: 0,
        trivial: false,
        note: None,
    };
    match gate_check(id.gate(), c) {
        Err((status, note)) => {
            outcome.status = status;
            outcome.note = Some(note);
        }
        Ok(trivial_note) => {
            let contributing: Vec<(f64, &ChartPoint)> =
                points.iter().filter_map(|e| e.residual(id).map(|r| (r, &e.point))).collect();
            outcome.points = contributing.len();
            match worst_of(contributing.into_iter()) {
                Some((r, p)) => {
                    outcome.max_residual = Some(r);
                    outcome.witness = Some(p.clone());
                    outcome.status = if r < tolerance { Status::Pass } else { Status::Fail };
                }
                None => {
                    outcome.status = Status::Vacuous;
                    outcome.note = Some("no sample carries this identity".into());
                }
            }
            if let Some(note) = trivial_note {
                outcome.trivial = true;
                outcome.note = Some(note.into());
            }
        }
    }
    outcome
}

pub fn evaluate_identities(ids: &[IdentityId], points: &[PointEval], c: &ClassificationReport) -> Vec<IdentityOutcome> {
    ids.iter().map(|&id| evaluate_identity(id, points, c)).collect()
}
