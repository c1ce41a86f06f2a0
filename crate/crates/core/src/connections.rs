//! Geodesic spray, nonlinear connection, Berwald and Cartan connection
//! coefficients, and covariant derivatives of jet tensor fields.
//!
//! Conventions: a covariant derivative appends one down slot, which is the
//! differentiation slot. In a natural chart the Berwald vertical derivative is
//! the plain `∂/∂y`; the Cartan vertical derivative adds `+C^i_mk` for each up
//! slot and `−C^m_jk` for each down slot. Horizontal derivatives use
//! `δ/δx^k = ∂/∂x^k − N^m_k ∂/∂y^m` plus the same per-slot corrections with
//! `G^i_jk` (Berwald) or `Γ^i_jk` (Cartan).

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{FinslerError, Result};
use crate::fundamentals::{jsum, FundamentalJets};
use crate::jets::{Jet, LiftedPoint};
use crate::metrics::{ChartPoint, MetricFixture};
use crate::tensor::{flat_index, Indices, JetTensor, Slot, Tensor};

use Slot::{Down, Up};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Connection {
    Berwald,
    Cartan,
}

/// Jet-level connection coefficients about one point.
#[derive(Debug, Clone)]
pub struct ConnectionJets {
    /// `G^i`
    pub spray: JetTensor,
    /// `N^i_j = ∂G^i/∂y^j`
    pub nonlinear: JetTensor,
    /// `G^i_jk = ∂N^i_j/∂y^k`
    pub berwald: JetTensor,
    /// `Γ^i_jk`
    pub cartan: JetTensor,
}

/// `δA/δx^k = ∂A/∂x^k − N^m_k ∂A/∂y^m`
pub fn delta(a: &Jet, nonlinear: &JetTensor, k: usize) -> Jet {
    let n = nonlinear.dim();
    let mut out = a.diff(k);
    for m in 0..n {
        out -= nonlinear.get(&[m, k]) * &a.diff(n + m);
    }
    out
}

impl ConnectionJets {
    pub fn compute(fund: &FundamentalJets, y: &[Jet]) -> Self {
        let n = fund.n;
        let e = &fund.energy;
        let dx: Vec<Jet> = (0..n).map(|l| e.diff(l)).collect();
        // y^k ∂²(L²)/∂x^k∂y^l − ∂(L²)/∂x^l
        let bracket: Vec<Jet> = (0..n)
            .map(|l| {
                let dyl = e.diff(n + l);
                let mixed = jsum((0..n).map(|k| &y[k] * &dyl.diff(k)));
                mixed - &dx[l]
            })
            .collect();
        let spray = JetTensor::from_fn(n, &[Up], |ix| {
            jsum((0..n).map(|l| fund.g_inv.get(&[ix[0], l]) * &bracket[l])) * 0.25
        });
        let nonlinear = JetTensor::from_fn(n, &[Up, Down], |ix| spray.get(&[ix[0]]).diff(n + ix[1]));
        let berwald = JetTensor::from_fn(n, &[Up, Down, Down], |ix| {
            nonlinear.get(&[ix[0], ix[1]]).diff(n + ix[2])
        });
        // dg[l][j][k] = δ_k g_lj
        let dg: Vec<Jet> = Indices::new(n, 3)
            .map(|ix| delta(fund.g.get(&[ix[0], ix[1]]), &nonlinear, ix[2]))
            .collect();
        let dgi = |l: usize, j: usize, k: usize| &dg[flat_index(n, &[l, j, k])];
        let lowered: Vec<Jet> = Indices::new(n, 3)
            .map(|ix| {
                let (l, j, k) = (ix[0], ix[1], ix[2]);
                (dgi(l, j, k) + dgi(l, k, j) - dgi(j, k, l).clone()) * 0.5
            })
            .collect();
        let cartan = JetTensor::from_fn(n, &[Up, Down, Down], |ix| {
            jsum((0..n).map(|l| fund.g_inv.get(&[ix[0], l]) * &lowered[flat_index(n, &[l, ix[1], ix[2]])]))
        });
        Self {
            spray,
            nonlinear,
            berwald,
            cartan,
        }
    }

    pub fn horizontal_coefficients(&self, conn: Connection) -> &JetTensor {
        match conn {
            Connection::Berwald => &self.berwald,
            Connection::Cartan => &self.cartan,
        }
    }
}

/// Adds connection corrections `±coeff · A` for every slot of `a` to the
/// derivative tensor `out` (which has the differentiation slot appended).
fn add_corrections(a: &JetTensor, coeff: &JetTensor, out: &mut [Jet]) {
    let n = a.dim();
    let rank = a.rank();
    for (pos, ix) in Indices::new(n, rank + 1).enumerate() {
        let k = ix[rank];
        let base = &ix[..rank];
        let mut acc: Option<Jet> = None;
        for (s, slot) in a.valence().iter().enumerate() {
            let mut jx = base.to_vec();
            for m in 0..n {
                jx[s] = m;
                let term = match slot {
                    Up => coeff.get(&[base[s], m, k]) * a.get(&jx),
                    Down => -(coeff.get(&[m, base[s], k]) * a.get(&jx)),
                };
                match acc.as_mut() {
                    Some(t) => *t += &term,
                    None => acc = Some(term),
                }
            }
        }
        if let Some(t) = acc {
            out[pos] += &t;
        }
    }
}

/// Vertical covariant derivative of a jet tensor field. For the Cartan
/// connection `cartan_mixed` must hold `C^i_jk`.
pub fn vertical_derivative(a: &JetTensor, conn: Connection, cartan_mixed: &JetTensor) -> JetTensor {
    let n = a.dim();
    let mut valence = a.valence().to_vec();
    valence.push(Down);
    let mut comps: Vec<Jet> = Indices::new(n, a.rank() + 1)
        .map(|ix| a.get(&ix[..a.rank()]).diff(n + ix[a.rank()]))
        .collect();
    if conn == Connection::Cartan {
        add_corrections(a, cartan_mixed, &mut comps);
    }
    JetTensor::from_comps(n, &valence, comps)
}

/// Horizontal covariant derivative of a jet tensor field.
pub fn horizontal_derivative(a: &JetTensor, conn: Connection, cj: &ConnectionJets) -> JetTensor {
    let n = a.dim();
    let mut valence = a.valence().to_vec();
    valence.push(Down);
    let mut comps: Vec<Jet> = Indices::new(n, a.rank() + 1)
        .map(|ix| delta(a.get(&ix[..a.rank()]), &cj.nonlinear, ix[a.rank()]))
        .collect();
    add_corrections(a, cj.horizontal_coefficients(conn), &mut comps);
    JetTensor::from_comps(n, &valence, comps)
}

/// Contracts the last (differentiation) slot of a tensor with `y`.
pub fn along_direction(a: &JetTensor, y: &[Jet]) -> JetTensor {
    let n = a.dim();
    let rank = a.rank();
    let valence = &a.valence()[..rank - 1];
    JetTensor::from_fn(n, valence, |ix| {
        let mut full = ix.to_vec();
        full.push(0);
        jsum((0..n).map(|m| {
            full[rank - 1] = m;
            a.get(&full) * &y[m]
        }))
    })
}

pub type JetEvaluator = dyn Fn(&[Jet], &[Jet]) -> Result<Vec<Jet>> + Send + Sync;
pub type PointEvaluator = dyn Fn(&ChartPoint) -> Result<Vec<f64>> + Send + Sync;

#[derive(Clone)]
pub enum Evaluator {
    /// Receives identity-lifted chart coordinates and returns jet
    /// components, so the field can be differentiated exactly.
    Jet(Arc<JetEvaluator>),
    /// Plain pointwise values; such a field cannot be differentiated.
    Pointwise(Arc<PointEvaluator>),
}

/// A π-tensor field given as a procedure.
#[derive(Clone)]
pub struct TensorField {
    name: String,
    valence: Vec<Slot>,
    evaluator: Evaluator,
}

impl fmt::Debug for TensorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TensorField")
            .field("name", &self.name)
            .field("valence", &self.valence)
            .field("jet_capable", &self.is_jet_capable())
            .finish()
    }
}

/// Order of the jets used when differentiating a field at a point; enough
/// for fields built from the Cartan tensor.
pub const FIELD_JET_ORDER: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuiltinField {
    /// `L`
    FinslerFunction,
    /// `η = y^i`
    Direction,
    /// `ℓ_i`
    SupportingElement,
    /// `g_ij`
    Metric,
    /// `ħ_ij`
    AngularMetric,
    /// `φ^i_j`
    AngularEndomorphism,
    /// `T_ijk`
    CartanTensor,
    /// `C_i`
    ContractedTorsion,
}

impl TensorField {
    pub fn from_jets(
        name: impl Into<String>,
        valence: &[Slot],
        f: impl Fn(&[Jet], &[Jet]) -> Result<Vec<Jet>> + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            valence: valence.to_vec(),
            evaluator: Evaluator::Jet(Arc::new(f)),
        }
    }

    pub fn pointwise(
        name: impl Into<String>,
        valence: &[Slot],
        f: impl Fn(&ChartPoint) -> Result<Vec<f64>> + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            valence: valence.to_vec(),
            evaluator: Evaluator::Pointwise(Arc::new(f)),
        }
    }

    /// Fields of the fundamental layer of a fixture.
    pub fn builtin(fixture: &MetricFixture, which: BuiltinField) -> Self {
        let fx = fixture.clone();
        let valence: &[Slot] = match which {
            BuiltinField::FinslerFunction => &[],
            BuiltinField::Direction => &[Up],
            BuiltinField::SupportingElement | BuiltinField::ContractedTorsion => &[Down],
            BuiltinField::Metric | BuiltinField::AngularMetric => &[Down, Down],
            BuiltinField::AngularEndomorphism => &[Up, Down],
            BuiltinField::CartanTensor => &[Down, Down, Down],
        };
        Self::from_jets(format!("{which:?}"), valence, move |x, y| {
            if which == BuiltinField::Direction {
                return Ok(y.to_vec());
            }
            if which == BuiltinField::FinslerFunction {
                return Ok(vec![fx.finsler_jet(x, y)?]);
            }
            let point = ChartPoint::new(
                x.iter().map(Jet::value).collect(),
                y.iter().map(Jet::value).collect(),
            )?;
            let fj = FundamentalJets::compute(&fx, x, y, &point)?;
            let t = match which {
                BuiltinField::SupportingElement => fj.ell,
                BuiltinField::Metric => fj.g,
                BuiltinField::AngularMetric => fj.hbar,
                BuiltinField::AngularEndomorphism => fj.phi,
                BuiltinField::CartanTensor => fj.t,
                BuiltinField::ContractedTorsion => fj.c,
                _ => unreachable!(),
            };
            Ok(t.comps().to_vec())
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn valence(&self) -> &[Slot] {
        &self.valence
    }

    pub fn is_jet_capable(&self) -> bool {
        matches!(self.evaluator, Evaluator::Jet(_))
    }

    pub fn evaluate(&self, p: &ChartPoint) -> Result<Tensor> {
        let comps = match &self.evaluator {
            Evaluator::Jet(f) => {
                // Builtin fields take three y-derivatives internally.
                let lp = LiftedPoint::new(p, 3);
                f(&lp.x, &lp.y)?.iter().map(Jet::value).collect()
            }
            Evaluator::Pointwise(f) => f(p)?,
        };
        self.check_len(p.dim(), comps.len())?;
        Ok(Tensor::from_comps(p.dim(), &self.valence, comps))
    }

    fn check_len(&self, n: usize, got: usize) -> Result<()> {
        let expected = n.pow(self.valence.len() as u32);
        if got != expected {
            return Err(FinslerError::InvalidArgument(format!(
                "field `{}` returned {got} components, expected {expected}",
                self.name
            )));
        }
        Ok(())
    }

    pub fn evaluate_jets(&self, lp: &LiftedPoint) -> Result<JetTensor> {
        let n = lp.dim();
        match &self.evaluator {
            Evaluator::Jet(f) => {
                let comps = f(&lp.x, &lp.y)?;
                self.check_len(n, comps.len())?;
                Ok(JetTensor::from_comps(n, &self.valence, comps))
            }
            Evaluator::Pointwise(_) => Err(FinslerError::NotJetCapable(self.name.clone())),
        }
    }
}

/// Spray coefficients `G^i` at a point.
pub fn spray(f: &MetricFixture, p: &ChartPoint) -> Result<Tensor> {
    let lp = LiftedPoint::new(p, 4);
    let fund = FundamentalJets::at(f, p, 4)?;
    Ok(ConnectionJets::compute(&fund, &lp.y).spray.value())
}

#[derive(Debug, Clone, Serialize)]
pub struct ConnectionData {
    #[serde(rename = "G")]
    pub spray: Tensor,
    #[serde(rename = "N")]
    pub nonlinear: Tensor,
    pub g_berwald: Tensor,
    pub gamma_cartan: Tensor,
}

pub fn connection_data(f: &MetricFixture, p: &ChartPoint) -> Result<ConnectionData> {
    let lp = LiftedPoint::new(p, 4);
    let fund = FundamentalJets::at(f, p, 4)?;
    let cj = ConnectionJets::compute(&fund, &lp.y);
    Ok(ConnectionData {
        spray: cj.spray.value(),
        nonlinear: cj.nonlinear.value(),
        g_berwald: cj.berwald.value(),
        gamma_cartan: cj.cartan.value(),
    })
}

fn field_setup(
    field: &TensorField,
    f: &MetricFixture,
    p: &ChartPoint,
) -> Result<(LiftedPoint, FundamentalJets, JetTensor)> {
    if !field.is_jet_capable() {
        return Err(FinslerError::NotJetCapable(field.name.clone()));
    }
    if p.dim() != f.dim() {
        return Err(FinslerError::InvalidArgument(format!(
            "point has dimension {}, fixture {}",
            p.dim(),
            f.dim()
        )));
    }
    let lp = LiftedPoint::new(p, FIELD_JET_ORDER);
    let fund = FundamentalJets::at(f, p, FIELD_JET_ORDER)?;
    let a = field.evaluate_jets(&lp)?;
    if a.order() == 0 {
        return Err(FinslerError::Jet(crate::jets::JetError::OutOfOrder { degree: 1, order: 0 }));
    }
    Ok((lp, fund, a))
}

/// Vertical covariant derivative of a field at a point; the appended slot is
/// the differentiation slot.
pub fn vertical_cov_deriv(field: &TensorField, conn: Connection, f: &MetricFixture, p: &ChartPoint) -> Result<Tensor> {
    let (_, fund, a) = field_setup(field, f, p)?;
    Ok(vertical_derivative(&a, conn, &fund.cartan_mixed).value())
}

/// Horizontal covariant derivative of a field at a point.
pub fn horizontal_cov_deriv(field: &TensorField, conn: Connection, f: &MetricFixture, p: &ChartPoint) -> Result<Tensor> {
    let (lp, fund, a) = field_setup(field, f, p)?;
    let cj = ConnectionJets::compute(&fund, &lp.y);
    Ok(horizontal_derivative(&a, conn, &cj).value())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::builtin_fixture;
    use std::collections::BTreeMap;

    fn fixture(name: &str, dim: usize) -> MetricFixture {
        builtin_fixture(name, dim, &BTreeMap::new()).unwrap()
    }

    #[test]
    fn minkowski_sprays_vanish() {
        for name in ["euclidean", "quartic-minkowski"] {
            let f = fixture(name, 3);
            let p = ChartPoint::new(vec![0.3, -0.2, 0.1], vec![0.5, 0.7, -0.2]).unwrap();
            assert_eq!(spray(&f, &p).unwrap().max_abs(), 0.0);
            let cd = connection_data(&f, &p).unwrap();
            assert_eq!(cd.gamma_cartan.max_abs(), 0.0);
        }
    }

    #[test]
    fn supporting_element_is_vertical_gradient() {
        let f = fixture("funk", 3);
        let p = ChartPoint::new(vec![0.2, 0.1, -0.1], vec![0.3, -0.4, 0.5]).unwrap();
        let field = TensorField::builtin(&f, BuiltinField::FinslerFunction);
        let d = vertical_cov_deriv(&field, Connection::Berwald, &f, &p).unwrap();
        let ell = TensorField::builtin(&f, BuiltinField::SupportingElement).evaluate(&p).unwrap();
        assert!(d.max_abs_diff(&ell) < 1e-12);
    }

    #[test]
    fn pointwise_fields_cannot_be_differentiated() {
        let f = fixture("euclidean", 2);
        let p = ChartPoint::new(vec![0.0, 0.0], vec![1.0, 0.0]).unwrap();
        let field = TensorField::pointwise("ones", &[Down], |_| Ok(vec![1.0, 1.0]));
        assert_eq!(field.evaluate(&p).unwrap().comps(), &[1.0, 1.0]);
        assert!(matches!(
            vertical_cov_deriv(&field, Connection::Cartan, &f, &p),
            Err(FinslerError::NotJetCapable(_))
        ));
    }
}
