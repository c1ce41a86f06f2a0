//! Fundamental tensor, supporting element, angular metric and the Cartan
//! tensor family.
//!
//! In a natural chart `g_ij = ½ ∂²(L²)/∂y^i∂y^j` and the Cartan tensor is
//! `T_ijk = ¼ ∂³(L²)/∂y^i∂y^j∂y^k`.

use serde::Serialize;

use crate::error::{FinslerError, Result};
use crate::jets::{Jet, LiftedPoint};
use crate::metrics::{guard_metric, ChartPoint, MetricFixture, Spectrum};
use crate::tensor::{invert_jet_matrix, JetTensor, Slot, Tensor};

use Slot::{Down, Up};

pub(crate) fn jsum(mut it: impl Iterator<Item = Jet>) -> Jet {
    let first = it.next().expect("non-empty sum");
    it.fold(first, |mut acc, j| {
        acc += &j;
        acc
    })
}

/// Jet-level fundamentals about one point. All tensors are expanded in the
/// `2n` chart variables (x first, then y).
#[derive(Debug, Clone)]
pub struct FundamentalJets {
    pub n: usize,
    pub l: Jet,
    /// `L²`
    pub energy: Jet,
    pub g: JetTensor,
    pub g_inv: JetTensor,
    /// `ℓ_i = g_ij y^j / L`
    pub ell: JetTensor,
    /// `ℓ^i = y^i / L`
    pub ell_up: JetTensor,
    pub hbar: JetTensor,
    pub phi: JetTensor,
    pub t: JetTensor,
    pub c: JetTensor,
    pub c_up: JetTensor,
    /// `C^i_jk = g^il T_ljk`
    pub cartan_mixed: JetTensor,
    pub spectrum: Spectrum,
}

impl FundamentalJets {
    /// `x`, `y` must be identity-lifted chart coordinates.
    pub fn compute(fixture: &MetricFixture, x: &[Jet], y: &[Jet], point: &ChartPoint) -> Result<Self> {
        let n = fixture.dim();
        let l = fixture.finsler_jet(x, y)?;
        if !(l.value() > 0.0) {
            return Err(FinslerError::DegenerateMetric {
                point: point.clone(),
                reason: format!("L = {} is not positive", l.value()),
            });
        }
        let energy = &l * &l;
        let de: Vec<Jet> = (0..n).map(|i| energy.diff(n + i)).collect();
        let g = JetTensor::from_fn(n, &[Down, Down], |ix| de[ix[0]].diff(n + ix[1]) * 0.5);
        guard_metric(&g.value(), point)?;
        let spectrum = Spectrum::of(&g.value());
        let g_inv = JetTensor::from_comps(
            n,
            &[Up, Up],
            invert_jet_matrix(g.comps(), n).map_err(|e| FinslerError::DegenerateMetric {
                point: point.clone(),
                reason: e.to_string(),
            })?,
        );
        let inv_l = l.recip()?;
        let ell = JetTensor::from_fn(n, &[Down], |ix| {
            jsum((0..n).map(|j| g.get(&[ix[0], j]) * &y[j])) * &inv_l
        });
        let ell_up = JetTensor::from_fn(n, &[Up], |ix| &y[ix[0]] * &inv_l);
        let hbar = JetTensor::from_fn(n, &[Down, Down], |ix| {
            g.get(ix) - &(ell.get(&[ix[0]]) * ell.get(&[ix[1]]))
        });
        let phi = JetTensor::from_fn(n, &[Up, Down], |ix| {
            jsum((0..n).map(|k| g_inv.get(&[ix[0], k]) * hbar.get(&[k, ix[1]])))
        });
        let t = JetTensor::from_fn(n, &[Down, Down, Down], |ix| {
            g.get(&[ix[0], ix[1]]).diff(n + ix[2]) * 0.5
        });
        let c = JetTensor::from_fn(n, &[Down], |ix| {
            jsum((0..n * n).map(|jk| g_inv.get(&[jk / n, jk % n]) * t.get(&[ix[0], jk / n, jk % n])))
        });
        let c_up = JetTensor::from_fn(n, &[Up], |ix| {
            jsum((0..n).map(|j| g_inv.get(&[ix[0], j]) * c.get(&[j])))
        });
        let cartan_mixed = JetTensor::from_fn(n, &[Up, Down, Down], |ix| {
            jsum((0..n).map(|m| g_inv.get(&[ix[0], m]) * t.get(&[m, ix[1], ix[2]])))
        });
        Ok(Self {
            n,
            l,
            energy,
            g,
            g_inv,
            ell,
            ell_up,
            hbar,
            phi,
            t,
            c,
            c_up,
            cartan_mixed,
            spectrum,
        })
    }

    /// Jets of the fundamental quantities at `point`; `order ≥ 3` since `T`
    /// takes three derivatives of `L²`.
    pub fn at(fixture: &MetricFixture, point: &ChartPoint, order: usize) -> Result<Self> {
        if order < 3 {
            return Err(FinslerError::InvalidArgument(format!(
                "fundamental jets need order at least 3, got {order}"
            )));
        }
        if !fixture.in_domain(point) {
            return Err(FinslerError::OutsideDomain {
                fixture: fixture.name().to_string(),
                point: point.clone(),
            });
        }
        let lp = LiftedPoint::new(point, order);
        Self::compute(fixture, &lp.x, &lp.y, point)
    }

    /// `y_i = g_ij y^j = L ℓ_i`
    pub fn y_lower(&self) -> JetTensor {
        JetTensor::from_fn(self.n, &[Down], |ix| self.ell.get(ix) * &self.l)
    }
}

/// Value-level fundamentals at a point, with the first derivatives needed by
/// [`angular_projection_check`] and a determinant route to `C`.
#[derive(Debug, Clone, Serialize)]
pub struct FundamentalPack {
    pub point: ChartPoint,
    #[serde(rename = "L")]
    pub l: f64,
    pub g: Tensor,
    pub g_inv: Tensor,
    pub ell: Tensor,
    pub hbar: Tensor,
    pub phi: Tensor,
    #[serde(rename = "T")]
    pub t: Tensor,
    #[serde(rename = "C")]
    pub c: Tensor,
    pub c_vec: Tensor,
    pub c_sq: f64,
    /// `∂L/∂y^i`
    pub dl_dy: Tensor,
    /// `∂ℓ_i/∂y^j`
    pub dell_dy: Tensor,
    /// `∂/∂y^i log √det g`, an independent route to `C_i`.
    pub c_from_det: Tensor,
    pub min_eigenvalue: f64,
}

/// Determinant of an `n × n` jet matrix by elimination with pivoting on
/// values.
pub fn jet_determinant(m: &[Jet], n: usize) -> Result<Jet> {
    let mut a = m.to_vec();
    let mut det = a[0].constant_like(1.0);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&r, &s| a[r * n + col].value().abs().total_cmp(&a[s * n + col].value().abs()))
            .expect("non-empty");
        if pivot != col {
            for k in 0..n {
                a.swap(pivot * n + k, col * n + k);
            }
            det = -det;
        }
        let p = a[col * n + col].clone();
        let inv = p.recip()?;
        det = &det * &p;
        for r in col + 1..n {
            let factor = &a[r * n + col] * &inv;
            for k in col..n {
                let d = &factor * &a[col * n + k];
                a[r * n + k] -= &d;
            }
        }
    }
    Ok(det)
}

pub fn fundamental_pack(f: &MetricFixture, p: &ChartPoint) -> Result<FundamentalPack> {
    let fj = FundamentalJets::at(f, p, 3)?;
    let n = fj.n;
    let dl_dy = Tensor::from_fn(n, &[Down], |ix| fj.l.diff(n + ix[0]).value());
    let dell_dy = Tensor::from_fn(n, &[Down, Down], |ix| {
        fj.ell.get(&[ix[0]]).diff(n + ix[1]).value()
    });
    let log_det = jet_determinant(fj.g.comps(), n)?.ln()?;
    let c_from_det = Tensor::from_fn(n, &[Down], |ix| 0.5 * log_det.diff(n + ix[0]).value());
    let c = fj.c.value();
    let c_vec = fj.c_up.value();
    let c_sq = (0..n).map(|i| c.get(&[i]) * c_vec.get(&[i])).sum();
    Ok(FundamentalPack {
        point: p.clone(),
        l: fj.l.value(),
        g: fj.g.value(),
        g_inv: fj.g_inv.value(),
        ell: fj.ell.value(),
        hbar: fj.hbar.value(),
        phi: fj.phi.value(),
        t: fj.t.value(),
        c,
        c_vec,
        c_sq,
        dl_dy,
        dell_dy,
        c_from_det,
        min_eigenvalue: fj.spectrum.min,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AngularProjectionReport {
    /// `max |∂L/∂y^i − ℓ_i|`
    pub supporting_element: f64,
    /// `max |∂ℓ_i/∂y^j − ħ_ij / L|`
    pub angular_metric: f64,
}

impl AngularProjectionReport {
    pub fn max(&self) -> f64 {
        self.supporting_element.max(self.angular_metric)
    }
}

/// Checks that the vertical derivative of `L` is `ℓ` and that of `ℓ` is
/// `ħ / L`.
pub fn angular_projection_check(pack: &FundamentalPack) -> AngularProjectionReport {
    let n = pack.g.dim();
    let scaled = Tensor::from_fn(n, &[Down, Down], |ix| pack.hbar.get(ix) / pack.l);
    AngularProjectionReport {
        supporting_element: pack.dl_dy.max_abs_diff(&pack.ell),
        angular_metric: pack.dell_dy.max_abs_diff(&scaled),
    }
}
