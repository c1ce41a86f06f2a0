//! Curvature and torsion tensors of the Berwald and Cartan connections.
//!
//! Index conventions (all chosen so that the displayed identities hold with
//! their stated signs):
//!
//! * `P°^i_jkl = ∂G^i_jk/∂y^l`, totally symmetric in `j, k, l`.
//! * `H^i_j` is the deviation tensor; `R̂^i_jk = ⅓(∂H^i_k/∂y^j − ∂H^i_j/∂y^k)`
//!   so that `H(X) = R̂(η, X)`, i.e. `y^j R̂^i_jk = H^i_k`.
//! * `R°^i_jkl = ∂R̂^i_jk/∂y^l` is `R°(X, Y)Z` with `X = j`, `Y = k`, `Z = l`.
//! * `L_ijk = −½ y_s P°^s_ijk` (Landsberg tensor), `P̂^i_jk = g^il L_ljk`.
//! * `S^i_jkl = C^i_km C^m_jl − C^i_lm C^m_jk` (Cartan vertical curvature).

use serde::Serialize;

use crate::connections::{horizontal_derivative, Connection, ConnectionJets};
use crate::error::{FinslerError, Result};
use crate::fundamentals::{jsum, FundamentalJets};
use crate::jets::{Jet, LiftedPoint};
use crate::metrics::{ChartPoint, MetricFixture};
use crate::tensor::{Indices, JetTensor, Slot, Tensor};

use Slot::{Down, Up};

/// Jet order carried by a full point evaluation: seven derivatives of `L²`
/// are consumed by the horizontal derivative of `R°`.
pub const TOWER_ORDER: usize = 7;

/// Lowest order at which [`CurvatureJets`] is defined: `R°` takes six
/// derivatives of `L²`.
pub const MIN_GEOMETRY_ORDER: usize = 6;

#[derive(Debug, Clone)]
pub struct CurvatureJets {
    pub p_berwald: JetTensor,
    pub deviation: JetTensor,
    pub r_hat: JetTensor,
    pub r_berwald: JetTensor,
    pub landsberg: JetTensor,
    pub p_hat: JetTensor,
    pub s_cartan: JetTensor,
}

impl CurvatureJets {
    pub fn compute(fund: &FundamentalJets, conn: &ConnectionJets, y: &[Jet]) -> Self {
        let n = fund.n;
        let p_berwald = JetTensor::from_fn(n, &[Up, Down, Down, Down], |ix| {
            conn.berwald.get(&ix[..3]).diff(n + ix[3])
        });
        let deviation = JetTensor::from_fn(n, &[Up, Down], |ix| {
            let (i, j) = (ix[0], ix[1]);
            let g_i = conn.spray.get(&[i]);
            let n_ij = conn.nonlinear.get(&[i, j]);
            let mut h = g_i.diff(j) * 2.0;
            for k in 0..n {
                h -= &y[k] * &n_ij.diff(k);
                h += (conn.spray.get(&[k]) * conn.berwald.get(&[i, j, k])) * 2.0;
                h -= conn.nonlinear.get(&[i, k]) * conn.nonlinear.get(&[k, j]);
            }
            h
        });
        let r_hat = JetTensor::from_fn(n, &[Up, Down, Down], |ix| {
            let (i, j, k) = (ix[0], ix[1], ix[2]);
            (deviation.get(&[i, k]).diff(n + j) - deviation.get(&[i, j]).diff(n + k)) * (1.0 / 3.0)
        });
        let r_berwald = JetTensor::from_fn(n, &[Up, Down, Down, Down], |ix| {
            r_hat.get(&ix[..3]).diff(n + ix[3])
        });
        let y_low = fund.y_lower();
        let landsberg = JetTensor::from_fn(n, &[Down, Down, Down], |ix| {
            jsum((0..n).map(|s| y_low.get(&[s]) * p_berwald.get(&[s, ix[0], ix[1], ix[2]]))) * -0.5
        });
        let p_hat = JetTensor::from_fn(n, &[Up, Down, Down], |ix| {
            jsum((0..n).map(|l| fund.g_inv.get(&[ix[0], l]) * landsberg.get(&[l, ix[1], ix[2]])))
        });
        let cm = &fund.cartan_mixed;
        let s_cartan = JetTensor::from_fn(n, &[Up, Down, Down, Down], |ix| {
            let (i, j, k, l) = (ix[0], ix[1], ix[2], ix[3]);
            jsum((0..n).map(|m| {
                cm.get(&[i, k, m]) * cm.get(&[m, j, l]) - cm.get(&[i, l, m]) * cm.get(&[m, j, k])
            }))
        });
        Self {
            p_berwald,
            deviation,
            r_hat,
            r_berwald,
            landsberg,
            p_hat,
            s_cartan,
        }
    }
}

/// Every jet-level object of the tower about one point.
#[derive(Debug, Clone)]
pub struct PointGeometry {
    pub point: ChartPoint,
    pub lifted: LiftedPoint,
    pub fund: FundamentalJets,
    pub conn: ConnectionJets,
    pub curv: CurvatureJets,
}

impl PointGeometry {
    pub fn new(f: &MetricFixture, p: &ChartPoint, order: usize) -> Result<Self> {
        if order < MIN_GEOMETRY_ORDER {
            return Err(FinslerError::InvalidArgument(format!(
                "curvature jets need order at least {MIN_GEOMETRY_ORDER}, got {order}"
            )));
        }
        let fund = FundamentalJets::at(f, p, order)?;
        let lifted = LiftedPoint::new(p, order);
        let conn = ConnectionJets::compute(&fund, &lifted.y);
        let curv = CurvatureJets::compute(&fund, &conn, &lifted.y);
        Ok(Self {
            point: p.clone(),
            lifted,
            fund,
            conn,
            curv,
        })
    }

    pub fn dim(&self) -> usize {
        self.fund.n
    }

    pub fn y(&self) -> &[Jet] {
        &self.lifted.y
    }
}

pub fn berwald_hv_curvature(f: &MetricFixture, p: &ChartPoint) -> Result<Tensor> {
    Ok(PointGeometry::new(f, p, MIN_GEOMETRY_ORDER)?.curv.p_berwald.value())
}

pub fn deviation_tensor(f: &MetricFixture, p: &ChartPoint) -> Result<Tensor> {
    Ok(PointGeometry::new(f, p, MIN_GEOMETRY_ORDER)?.curv.deviation.value())
}

#[derive(Debug, Clone, Serialize)]
pub struct VhTorsionAndCurvature {
    pub r_hat: Tensor,
    pub r_berwald: Tensor,
}

pub fn vh_torsion_and_h_curvature(f: &MetricFixture, p: &ChartPoint) -> Result<VhTorsionAndCurvature> {
    let pg = PointGeometry::new(f, p, MIN_GEOMETRY_ORDER)?;
    Ok(VhTorsionAndCurvature {
        r_hat: pg.curv.r_hat.value(),
        r_berwald: pg.curv.r_berwald.value(),
    })
}

/// Landsberg tensor by spray contraction, together with the second route
/// `y^m (∇_{δ_m} T)_ijk` through the Cartan horizontal derivative.
#[derive(Debug, Clone, Serialize)]
pub struct LandsbergReport {
    pub landsberg: Tensor,
    pub via_cartan_derivative: Tensor,
    pub route_residual: f64,
}

pub fn landsberg_second_route(pg: &PointGeometry) -> JetTensor {
    let dt = horizontal_derivative(&pg.fund.t, Connection::Cartan, &pg.conn);
    crate::connections::along_direction(&dt, pg.y())
}

pub fn landsberg_tensor(f: &MetricFixture, p: &ChartPoint) -> Result<LandsbergReport> {
    let pg = PointGeometry::new(f, p, MIN_GEOMETRY_ORDER)?;
    let a = pg.curv.landsberg.value();
    let b = landsberg_second_route(&pg).value();
    let route_residual = relative_residual(&a, &b);
    Ok(LandsbergReport {
        landsberg: a,
        via_cartan_derivative: b,
        route_residual,
    })
}

pub fn cartan_hv_torsion(f: &MetricFixture, p: &ChartPoint) -> Result<Tensor> {
    Ok(PointGeometry::new(f, p, MIN_GEOMETRY_ORDER)?.curv.p_hat.value())
}

pub fn cartan_v_curvature(f: &MetricFixture, p: &ChartPoint) -> Result<Tensor> {
    Ok(PointGeometry::new(f, p, MIN_GEOMETRY_ORDER)?.curv.s_cartan.value())
}

/// `‖a − b‖∞ / max(1, ‖a‖∞, ‖b‖∞)`
pub fn relative_residual(a: &Tensor, b: &Tensor) -> f64 {
    a.max_abs_diff(b) / 1f64.max(a.max_abs()).max(b.max_abs())
}

/// The cyclic sum over `X, Y, Z` of `(D°_{βX} R°)(Y, Z, W) + P°(R̂(X, Y), Z) W`
/// as a tensor `B^i_XYZW`, with the largest single term for scaling.
pub fn bianchi_tensor(pg: &PointGeometry) -> (Tensor, f64) {
    let n = pg.dim();
    let dr = horizontal_derivative(&pg.curv.r_berwald, Connection::Berwald, &pg.conn).value();
    let p = pg.curv.p_berwald.value();
    let rh = pg.curv.r_hat.value();
    let mut scale: f64 = 0.0;
    let b = Tensor::from_fn(n, &[Up, Down, Down, Down, Down], |ix| {
        let (i, w) = (ix[0], ix[4]);
        let mut total = 0.0;
        for (x, y, z) in [(ix[1], ix[2], ix[3]), (ix[2], ix[3], ix[1]), (ix[3], ix[1], ix[2])] {
            let d = dr.get(&[i, y, z, w, x]);
            let q: f64 = (0..n).map(|m| p.get(&[i, m, z, w]) * rh.get(&[m, x, y])).sum();
            scale = scale.max(d.abs()).max(q.abs());
            total += d + q;
        }
        total
    });
    (b, scale)
}

/// Maximum of the second Bianchi combination contracted with each supplied
/// `(X, Y, Z)` triple, over all `W` and output components, relative to the
/// largest contributing term (floored at 1).
pub fn bianchi_residual(f: &MetricFixture, p: &ChartPoint, directions: &[[Vec<f64>; 3]]) -> Result<f64> {
    let n = f.dim();
    if directions.iter().flatten().any(|v| v.len() != n) {
        return Err(FinslerError::InvalidArgument(format!(
            "direction vectors must have {n} components"
        )));
    }
    let pg = PointGeometry::new(f, p, TOWER_ORDER)?;
    let (b, scale) = bianchi_tensor(&pg);
    let mut worst: f64 = 0.0;
    for [x, y, z] in directions {
        for i in 0..n {
            for w in 0..n {
                let mut v = 0.0;
                for ix in Indices::new(n, 3) {
                    v += b.get(&[i, ix[0], ix[1], ix[2], w]) * x[ix[0]] * y[ix[1]] * z[ix[2]];
                }
                worst = worst.max(v.abs());
            }
        }
    }
    Ok(worst / scale.max(1.0))
}
