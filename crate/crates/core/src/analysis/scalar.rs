//! Scalar-curvature extraction `r = tr H / ((n − 1) L²)` and its derivatives.

use serde::Serialize;

use crate::connections::delta;
use crate::curvatures::PointGeometry;
use crate::error::Result;
use crate::fundamentals::jsum;
use crate::jets::Jet;
use crate::metrics::{ChartPoint, MetricFixture};
use crate::tensor::{JetTensor, Slot, Tensor};

use Slot::Down;

/// `‖H‖∞ / L²` below this counts as flat.
pub const FLAT_FLOOR: f64 = 1e-9;

#[derive(Debug, Clone, Serialize)]
pub struct ScalarCurvatureFit {
    pub r: f64,
    /// `‖H − rL²φ‖∞ / (‖H‖∞ + ‖L²φ‖∞)`
    pub residual: f64,
    /// `∂r/∂y^i`
    pub r_grad_v: Tensor,
    /// `δr/δx^i`
    pub r_grad_h: Tensor,
    /// `y^i ∂r/∂y^i`
    pub euler_defect: f64,
    /// The deviation tensor is at noise level, so no fit was attempted.
    pub flat: bool,
    /// Scalar curvature is only a restriction for `n ≥ 3`.
    pub low_dimension: bool,
}

/// `r` and its vertical, second vertical and horizontal derivatives as jets.
#[derive(Debug, Clone)]
pub struct ScalarJets {
    pub r: Jet,
    pub dr: JetTensor,
    pub ddr: JetTensor,
    pub hr: JetTensor,
}

impl ScalarJets {
    pub fn compute(pg: &PointGeometry) -> Result<Self> {
        let n = pg.dim();
        let h = &pg.curv.deviation;
        let trace = jsum((0..n).map(|i| h.get(&[i, i]).clone()));
        let r = trace.checked_div(&(&pg.fund.energy * (n as f64 - 1.0)))?;
        let dr = JetTensor::from_fn(n, &[Down], |ix| r.diff(n + ix[0]));
        let ddr = JetTensor::from_fn(n, &[Down, Down], |ix| dr.get(&[ix[0]]).diff(n + ix[1]));
        let hr = JetTensor::from_fn(n, &[Down], |ix| delta(&r, &pg.conn.nonlinear, ix[0]));
        Ok(Self { r, dr, ddr, hr })
    }
}

pub fn fit_from_geometry(pg: &PointGeometry, sj: &ScalarJets) -> ScalarCurvatureFit {
    let n = pg.dim();
    let h = pg.curv.deviation.value();
    let l2 = pg.fund.energy.value();
    let phi = pg.fund.phi.value();
    let low_dimension = n < 3;
    if h.max_abs() < FLAT_FLOOR * l2 {
        return ScalarCurvatureFit {
            r: 0.0,
            residual: 0.0,
            r_grad_v: Tensor::zeros(n, &[Down]),
            r_grad_h: Tensor::zeros(n, &[Down]),
            euler_defect: 0.0,
            flat: true,
            low_dimension,
        };
    }
    let r = sj.r.value();
    let l2phi = Tensor::from_fn(n, phi.valence(), |ix| l2 * phi.get(ix));
    let fit = Tensor::from_fn(n, phi.valence(), |ix| r * l2phi.get(ix));
    let residual = h.max_abs_diff(&fit) / (h.max_abs() + l2phi.max_abs());
    let r_grad_v = sj.dr.value();
    let euler_defect = (0..n).map(|i| pg.point.y[i] * r_grad_v.get(&[i])).sum::<f64>();
    ScalarCurvatureFit {
        r,
        residual,
        r_grad_v,
        r_grad_h: sj.hr.value(),
        euler_defect,
        flat: false,
        low_dimension,
    }
}

pub fn extract_scalar_curvature(f: &MetricFixture, p: &ChartPoint) -> Result<ScalarCurvatureFit> {
    let pg = PointGeometry::new(f, p, crate::curvatures::MIN_GEOMETRY_ORDER)?;
    let sj = ScalarJets::compute(&pg)?;
    Ok(fit_from_geometry(&pg, &sj))
}
