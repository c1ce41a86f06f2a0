//! Everything measured at a single sample point: predicate norms, the
//! scalar-curvature fit, and the residual of every registered identity that
//! is computable there.

use serde::Serialize;

use super::checks::{self, Frame};
use super::identities::IdentityId::{self, *};
use super::scalar::{fit_from_geometry, ScalarCurvatureFit, ScalarJets};
use crate::connections::{along_direction, delta, horizontal_derivative, vertical_derivative, Connection};
use crate::curvatures::{bianchi_tensor, landsberg_second_route, relative_residual as rel, PointGeometry, TOWER_ORDER};
use crate::error::Result;
use crate::fundamentals::{jet_determinant, jsum, FundamentalJets};
use crate::metrics::{ChartPoint, MetricFixture};
use crate::tensor::{JetTensor, Slot, Tensor};

use Connection::{Berwald, Cartan};
use Slot::{Down, Up};

#[derive(Debug, Clone, Serialize)]
pub struct PointMeasures {
    /// `‖T‖∞`
    pub t_norm: f64,
    /// `‖P°‖∞`
    pub p_norm: f64,
    /// `‖Landsberg tensor‖∞`
    pub landsberg_norm: f64,
    /// Residual of the C-reducible form, relative to `‖T‖`.
    pub c_reducible_residual: f64,
    pub fit: ScalarCurvatureFit,
    pub alpha: f64,
    pub mu: f64,
    pub psi: f64,
}

#[derive(Debug, Clone)]
pub struct PointEval {
    pub point: ChartPoint,
    pub measures: PointMeasures,
    residuals: Vec<Option<f64>>,
}

impl PointEval {
    /// `None` when the identity has no meaning at this point (for example a
    /// scalar-curvature identity at a flat point).
    pub fn residual(&self, id: IdentityId) -> Option<f64> {
        self.residuals[id.index()]
    }
}

struct Residuals(Vec<Option<f64>>);

impl Residuals {
    fn set(&mut self, id: IdentityId, value: f64) {
        self.0[id.index()] = Some(value);
    }
}

pub fn frame(fund: &FundamentalJets, y: &[f64]) -> Frame {
    Frame {
        n: fund.n,
        l: fund.l.value(),
        y: y.to_vec(),
        g: fund.g.value(),
        g_inv: fund.g_inv.value(),
        ell: fund.ell.value(),
        hbar: fund.hbar.value(),
        phi: fund.phi.value(),
        t: fund.t.value(),
        c: fund.c.value(),
        c_up: fund.c_up.value(),
    }
}

/// `‖t‖∞ / max(1, ‖scale‖∞)`
fn norm_rel(t: &Tensor, scale: f64) -> f64 {
    t.max_abs() / scale.max(1.0)
}

/// `T(X,Y)^i = C^i_Xm Y^m` for a vector value `y`, indexed `[i, X]`.
fn apply_mixed(m: &Tensor, v: &Tensor) -> Tensor {
    let n = m.dim();
    Tensor::from_fn(n, &[Up, Down], |ix| {
        (0..n).map(|k| m.get(&[ix[0], ix[1], k]) * v.get(&[k])).sum()
    })
}

fn add(a: &Tensor, b: &Tensor, s: f64) -> Tensor {
    Tensor::from_fn(a.dim(), a.valence(), |ix| a.get(ix) + s * b.get(ix))
}

pub fn evaluate_point(f: &MetricFixture, p: &ChartPoint) -> Result<PointEval> {
    let pg = PointGeometry::new(f, p, TOWER_ORDER)?;
    let n = pg.dim();
    let (fund, conn, curv) = (&pg.fund, &pg.conn, &pg.curv);
    let y = pg.y();
    let yv = &p.y;
    let fr = frame(fund, yv);
    let cm = &fund.cartan_mixed;
    let l = fr.l;
    let mut out = Residuals(vec![None; IdentityId::ALL.len()]);

    // Fundamentals.
    let sym = fr.t.asymmetry(&[0, 1, 2]).max(fr.hbar.asymmetry(&[0, 1])).max(fr.g.asymmetry(&[0, 1]));
    out.set(CartanTensorSymmetry, sym / fr.t.max_abs().max(1.0));

    let dt = vertical_derivative(&fund.t, Cartan, cm).value();
    out.set(CartanVerticalDerivativeSymmetry, dt.asymmetry(&[0, 1, 2, 3]) / dt.max_abs().max(1.0));

    let scalar_l = JetTensor::from_comps(n, &[], vec![fund.l.clone()]);
    let hbar_over_l = Tensor::from_fn(n, &[Down, Down], |ix| fr.hbar.get(ix) / l);
    let mut worst: f64 = 0.0;
    for c in [Berwald, Cartan] {
        worst = worst.max(rel(&vertical_derivative(&scalar_l, c, cm).value(), &fr.ell));
        worst = worst.max(rel(&vertical_derivative(&fund.ell, c, cm).value(), &hbar_over_l));
    }
    out.set(SupportingElementGradient, worst);

    // D°φ stored [i, Y, X]
    let d_phi = vertical_derivative(&fund.phi, Berwald, cm).value();
    let d_phi_rhs = Tensor::from_fn(n, &[Up, Down, Down], |ix| {
        let (i, yy, x) = (ix[0], ix[1], ix[2]);
        -fr.hbar.get(&[x, yy]) * yv[i] / (l * l) - fr.phi.get(&[i, x]) * fr.ell.get(&[yy]) / l
    });
    out.set(AngularEndomorphismVertical, rel(&d_phi, &d_phi_rhs));

    // Dħ stored [Y, Z, X]
    let hbar_rhs = |with_t: f64| {
        Tensor::from_fn(n, &[Down; 3], |ix| {
            let (yy, z, x) = (ix[0], ix[1], ix[2]);
            with_t * 2.0 * fr.t.get(&[x, yy, z])
                - fr.hbar.get(&[x, yy]) * fr.ell.get(&[z]) / l
                - fr.hbar.get(&[x, z]) * fr.ell.get(&[yy]) / l
        })
    };
    let d_hbar_b = vertical_derivative(&fund.hbar, Berwald, cm).value();
    out.set(BerwaldVerticalAngularMetric, rel(&d_hbar_b, &hbar_rhs(1.0)));
    let d_hbar_c = vertical_derivative(&fund.hbar, Cartan, cm).value();
    out.set(CartanVerticalAngularMetric, rel(&d_hbar_c, &hbar_rhs(0.0)));

    let gyy: f64 = (0..n * n).map(|k| fr.g.get(&[k / n, k % n]) * yv[k / n] * yv[k % n]).sum();
    let homog = ((gyy - l * l).abs() / (l * l).max(1.0))
        .max(norm_rel(&fr.hbar.contract(1, yv), fr.hbar.max_abs()))
        .max(norm_rel(&fr.t.contract(2, yv), fr.t.max_abs()))
        .max(norm_rel(&fr.phi.contract(1, yv), fr.phi.max_abs()));
    out.set(FundamentalHomogeneity, homog);

    let phi2 = Tensor::from_fn(n, &[Up, Down], |ix| {
        (0..n).map(|m| fr.phi.get(&[ix[0], m]) * fr.phi.get(&[m, ix[1]])).sum()
    });
    let trace: f64 = (0..n).map(|i| fr.phi.get(&[i, i])).sum();
    out.set(AngularProjector, rel(&phi2, &fr.phi).max((trace - (n as f64 - 1.0)).abs()));

    let log_det = jet_determinant(fund.g.comps(), n)?.ln()?;
    let c_det = Tensor::from_fn(n, &[Down], |ix| 0.5 * log_det.diff(n + ix[0]).value());
    out.set(ContractedTorsionTwoRoute, rel(&c_det, &fr.c));

    // Connections.
    let g_spray = conn.spray.value();
    let nl = conn.nonlinear.value();
    let gb = conn.berwald.value();
    let gamma = conn.cartan.value();
    let two_g = Tensor::from_fn(n, &[Up], |ix| 2.0 * g_spray.get(ix));
    let spray = rel(&nl.contract(1, yv), &two_g)
        .max(rel(&gb.contract(2, yv), &nl))
        .max(rel(&gamma.contract(2, yv), &nl))
        .max(gamma.asymmetry(&[1, 2]) / gamma.max_abs().max(1.0));
    out.set(SprayHomogeneity, spray);

    let metricity = horizontal_derivative(&fund.g, Cartan, conn)
        .value()
        .max_abs()
        .max(vertical_derivative(&fund.g, Cartan, cm).value().max_abs());
    out.set(CartanMetricity, metricity / fr.g.max_abs().max(1.0));

    let eta = JetTensor::from_comps(n, &[Up], y.to_vec());
    let deflection = horizontal_derivative(&eta, Berwald, conn)
        .value()
        .max_abs()
        .max(horizontal_derivative(&eta, Cartan, conn).value().max_abs());
    out.set(Deflection, deflection / l.max(1.0));

    let dl = (0..n).fold(0f64, |m, k| m.max(delta(&fund.l, &conn.nonlinear, k).value().abs()));
    let d_ell = horizontal_derivative(&fund.ell, Berwald, conn).value().max_abs();
    out.set(HorizontalInvarianceOfL, dl.max(d_ell) / l.max(1.0));

    // A non-homogeneous test vector field for the connection relations.
    let field = JetTensor::from_fn(n, &[Up], |ix| {
        let i = ix[0];
        &pg.lifted.x[i] * &y[(i + 1) % n] + &y[i] * &y[i] * 0.5 + 1.0
    });
    let fv = field.value();
    let dv_b = vertical_derivative(&field, Berwald, cm).value();
    let dv_c = vertical_derivative(&field, Cartan, cm).value();
    out.set(BerwaldCartanVertical, rel(&dv_b, &add(&dv_c, &apply_mixed(&cm.value(), &fv), -1.0)));
    let dh_b = horizontal_derivative(&field, Berwald, conn).value();
    let dh_c = horizontal_derivative(&field, Cartan, conn).value();
    let p_hat = curv.p_hat.value();
    out.set(BerwaldCartanHorizontal, rel(&dh_b, &add(&dh_c, &apply_mixed(&p_hat, &fv), 1.0)));

    // Curvatures.
    let pb = curv.p_berwald.value();
    out.set(
        BerwaldHvCurvatureSymmetry,
        pb.asymmetry(&[1, 2, 3]).max(pb.contract(1, yv).max_abs()) / pb.max_abs().max(1.0),
    );
    let h = curv.deviation.value();
    out.set(DeviationDirection, norm_rel(&h.contract(1, yv), h.max_abs()));
    let rh = curv.r_hat.value();
    out.set(VhTorsionContraction, rel(&rh.contract(1, yv), &h));
    let bracket = JetTensor::from_fn(n, &[Up, Down, Down], |ix| {
        let (i, j, k) = (ix[0], ix[1], ix[2]);
        delta(conn.nonlinear.get(&[i, j]), &conn.nonlinear, k) - delta(conn.nonlinear.get(&[i, k]), &conn.nonlinear, j)
    });
    out.set(VhTorsionBracket, rel(&rh, &bracket.value()));
    let rb = curv.r_berwald.value();
    let anti = Tensor::from_fn(n, rb.valence(), |ix| {
        rb.get(ix) + rb.get(&[ix[0], ix[2], ix[1], ix[3]])
    });
    out.set(
        HCurvatureStructure,
        (anti.max_abs() / rb.max_abs().max(1.0)).max(rel(&rb.contract(3, yv), &rh)),
    );

    let lt = curv.landsberg.value();
    let lt2 = landsberg_second_route(&pg).value();
    let landsberg = rel(&lt, &lt2)
        .max(lt.asymmetry(&[0, 1, 2]) / lt.max_abs().max(1.0))
        .max(norm_rel(&lt.contract(0, yv), lt.max_abs()));
    out.set(LandsbergTwoRoute, landsberg);

    let (b, scale) = bianchi_tensor(&pg);
    out.set(SecondBianchi, b.max_abs() / scale.max(1.0));

    // y^k (D°_βk P°)^i_YXW against Σ_m y^m ∂_X R°^i_YmW
    let hp = along_direction(&horizontal_derivative(&curv.p_berwald, Berwald, conn), y).value();
    let dr_v = vertical_derivative(&curv.r_berwald, Berwald, cm).value();
    let exch = Tensor::from_fn(n, &[Up, Down, Down, Down], |ix| {
        let (i, yy, x, w) = (ix[0], ix[1], ix[2], ix[3]);
        (0..n).map(|m| yv[m] * dr_v.get(&[i, yy, m, w, x])).sum()
    });
    out.set(HvExchange, rel(&hp, &exch));

    // (D°_βX R̂)(Y,Z) stored [i, Y, Z, X]
    let d_rh = horizontal_derivative(&curv.r_hat, Berwald, conn).value();
    let cyc = Tensor::from_fn(n, &[Up, Down, Down, Down], |ix| {
        let (i, x, yy, z) = (ix[0], ix[1], ix[2], ix[3]);
        d_rh.get(&[i, yy, z, x]) + d_rh.get(&[i, z, x, yy]) + d_rh.get(&[i, x, yy, z])
    });
    out.set(VhTorsionCyclic, norm_rel(&cyc, d_rh.max_abs()));

    let s = curv.s_cartan.value();
    let s_anti = Tensor::from_fn(n, s.valence(), |ix| s.get(ix) + s.get(&[ix[0], ix[1], ix[3], ix[2]]));
    out.set(CartanVCurvatureAntisymmetry, norm_rel(&s_anti, s.max_abs()));

    // (∇_γX C)(W) and (D°_γX C)(W) stored [W, X]
    let nabla_v_c = vertical_derivative(&fund.c, Cartan, cm).value();
    out.set(VerticalCSymmetry, nabla_v_c.asymmetry(&[0, 1]) / nabla_v_c.max_abs().max(1.0));
    let d_c = vertical_derivative(&fund.c, Berwald, cm).value();

    // C-reducible consequences.
    let c_red = checks::c_reducibility(&fr.t, &fr.hbar, &fr.c, 0.0);
    let lhs = checks::c_reducible_lhs(&fr, &nabla_v_c);
    let (alpha, prop_res) = checks::proportionality_to_hbar(&lhs, &fr.hbar, &fr.g_inv);
    out.set(CReducibleProportionality, prop_res);
    out.set(CReducibleVerticalC, rel(&nabla_v_c, &checks::c_reducible_nabla_c(&fr, &d_c)));
    let psi = checks::psi(&fr, alpha);
    let psi_lhs = checks::c_quadratic_lhs(&fr, &d_c, 2.0 / (n as f64 + 1.0));
    let psi_rhs = Tensor::from_fn(n, &[Down, Down], |ix| psi * fr.hbar.get(ix));
    out.set(CReduciblePsi, rel(&psi_lhs, &psi_rhs));

    // Landsberg consequences.
    let h_t = horizontal_derivative(&fund.t, Cartan, conn).value();
    out.set(LandsbergHorizontalSymmetry, h_t.asymmetry(&[0, 1, 2, 3]) / h_t.max_abs().max(1.0));
    let h_c = horizontal_derivative(&fund.c, Cartan, conn).value();
    out.set(LandsbergHorizontalCSymmetry, h_c.asymmetry(&[0, 1]) / h_c.max_abs().max(1.0));
    let h_s = horizontal_derivative(&curv.s_cartan, Cartan, conn).value();
    out.set(CartanVCurvatureParallel, norm_rel(&h_s, s.max_abs()));

    let h_c_bar = horizontal_derivative(&fund.c_up, Cartan, conn).value();
    let (mu, mu_res) = checks::mu_from_pair(&h_c_bar, &fr.phi);
    out.set(CHorizontalProportionality, mu_res);
    let nn = Tensor::from_fn(n, &[Down], |ix| (n as f64 - 2.0) * mu * fr.c.get(ix));
    out.set(DimensionContraction, nn.max_abs());

    // Scalar-curvature consequences.
    let sj = ScalarJets::compute(&pg)?;
    let fit = fit_from_geometry(&pg, &sj);
    if !fit.flat {
        let r = fit.r;
        let dr = sj.dr.value();
        let ddr = sj.ddr.value();
        let hr = sj.hr.value();
        let a = checks::aux_a(&fr, r, &dr, &ddr);
        let bt = checks::aux_b(&fr, r, &dr);
        let m = checks::aux_m(&fr, &dr, &ddr);
        out.set(ScalarCurvatureHomogeneity, fit.euler_defect.abs() / r.abs().max(1.0));

        let a_eta_x = Tensor::from_fn(n, &[Down], |ix| {
            r * l * fr.ell.get(ix) + 2.0 / 3.0 * l * l * dr.get(ix)
        });
        out.set(AuxAEtaFirst, rel(&a.contract(0, yv), &a_eta_x));
        out.set(AuxAEtaSecond, rel(&a.contract(1, yv), &bt));
        let a_ee: f64 = a.contract(0, yv).contract(0, yv).get(&[]);
        let b_e: f64 = bt.contract(0, yv).get(&[]);
        let rl2 = r * l * l;
        out.set(AuxEtaEta, (a_ee - rl2).abs().max((b_e - rl2).abs()) / rl2.abs().max(1.0));

        let b_jet = JetTensor::from_fn(n, &[Down], |ix| {
            &sj.r * &fund.l * fund.ell.get(ix) + &fund.energy * sj.dr.get(ix) * (1.0 / 3.0)
        });
        // (D°_γY B)(X) stored [X, Y]
        let d_b = vertical_derivative(&b_jet, Berwald, cm).value();
        let d_b_rhs = Tensor::from_fn(n, &[Down, Down], |ix| a.get(ix) + r * fr.hbar.get(ix));
        out.set(AuxBVerticalDerivative, rel(&d_b, &d_b_rhs));

        out.set(HCurvatureScalarForm, rel(&rb, &checks::h_curvature_scalar_form(&fr, r, &a, &bt)));
        out.set(VhTorsionScalarForm, rel(&rh, &checks::vh_torsion_scalar_form(&fr, &bt)));

        // 𝐏°(Y,X,W,Z) = g_Zi P°^i_YXW
        let p_low = JetTensor::from_fn(n, &[Down; 4], |ix| {
            jsum((0..n).map(|i| fund.g.get(&[ix[3], i]) * curv.p_berwald.get(&[i, ix[0], ix[1], ix[2]])))
        });
        let hp_low = along_direction(&horizontal_derivative(&p_low, Berwald, conn), y).value();
        out.set(HvDerivativeScalarForm, rel(&hp_low, &checks::hv_derivative_scalar_form(&fr, r, &dr, &m)));
        out.set(
            HvDerivativeScalarFormEta,
            rel(&hp_low.contract(3, yv), &checks::hv_derivative_scalar_form_eta(&fr, r, &dr)),
        );

        out.set(LandsbergCartanForm, rel(&fr.t, &checks::landsberg_cartan_form(&fr, r, &dr)));
        out.set(LandsbergRGradient, rel(&dr, &checks::landsberg_r_gradient(&fr, r)));

        let q7 = checks::c_quadratic_lhs(&fr, &d_c, 3.0 / (n as f64 + 1.0));
        out.set(BerwaldCQuadratic, q7.max_abs());
        out.set(RiemannianEndState, fr.c.max_abs().max(fr.t.max_abs()));
        out.set(RVerticallyParallel, dr.max_abs() / r.abs().max(1.0));
        out.set(VhTorsionConstantForm, rel(&rh, &checks::vh_torsion_constant_form(&fr, r)));
        out.set(RHorizontalGradientRadial, rel(&hr, &checks::radial_part(&fr, &hr)));
        out.set(RHorizontallyParallel, hr.max_abs() / r.abs().max(1.0));
    }

    Ok(PointEval {
        point: p.clone(),
        measures: PointMeasures {
            t_norm: fr.t.max_abs(),
            p_norm: pb.max_abs(),
            landsberg_norm: lt.max_abs(),
            c_reducible_residual: c_red.residual,
            fit,
            alpha,
            mu,
            psi,
        },
        residuals: out.0,
    })
}
