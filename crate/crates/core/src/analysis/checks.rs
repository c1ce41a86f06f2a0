//! Pure tensor-level formulas and scalar extractions. Every function here
//! works on plain [`Tensor`] values so it can be fed constructed inputs.
//!
//! Slot layout follows the rest of the crate: a derivative's
//! differentiation slot is the last one, so `(∇_γX C)(W)` is stored at
//! `[W, X]`.

use serde::Serialize;

use crate::curvatures::relative_residual;
use crate::tensor::{Slot, Tensor};

use Slot::{Down, Up};

/// Value-level fundamentals at one point.
#[derive(Debug, Clone)]
pub struct Frame {
    pub n: usize,
    pub l: f64,
    pub y: Vec<f64>,
    pub g: Tensor,
    pub g_inv: Tensor,
    pub ell: Tensor,
    pub hbar: Tensor,
    pub phi: Tensor,
    pub t: Tensor,
    pub c: Tensor,
    pub c_up: Tensor,
}

impl Frame {
    fn nf(&self) -> f64 {
        self.n as f64
    }

    pub fn c_sq(&self) -> f64 {
        (0..self.n).map(|i| self.c.get(&[i]) * self.c_up.get(&[i])).sum()
    }
}

/// `(1/(n+1)) {ħ(X,Y)C(Z) + ħ(Y,Z)C(X) + ħ(Z,X)C(Y)}`
pub fn c_reducible_form(hbar: &Tensor, c: &Tensor) -> Tensor {
    let n = hbar.dim();
    Tensor::from_fn(n, &[Down; 3], |ix| {
        let (x, y, z) = (ix[0], ix[1], ix[2]);
        (hbar.get(&[x, y]) * c.get(&[z]) + hbar.get(&[y, z]) * c.get(&[x]) + hbar.get(&[z, x]) * c.get(&[y]))
            / (n as f64 + 1.0)
    })
}

/// Floor used when normalising the C-reducibility residual by `‖T‖`.
pub const C_REDUCIBLE_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CReducibility {
    pub residual: f64,
    /// `T` is at zero-test level: the form holds vacuously.
    pub trivial: bool,
}

pub fn c_reducibility(t: &Tensor, hbar: &Tensor, c: &Tensor, tol_zero: f64) -> CReducibility {
    let form = c_reducible_form(hbar, c);
    let norm = t.max_abs();
    CReducibility {
        residual: t.max_abs_diff(&form) / norm.max(C_REDUCIBLE_FLOOR),
        trivial: norm < tol_zero,
    }
}

/// Scalar `s` with `lhs ≈ s · hbar`, by the metric trace
/// `s = g^{XW} lhs_XW / (n − 1)`, and the residual of the fit.
pub fn proportionality_to_hbar(lhs: &Tensor, hbar: &Tensor, g_inv: &Tensor) -> (f64, f64) {
    let n = lhs.dim();
    let mut trace = 0.0;
    for x in 0..n {
        for w in 0..n {
            trace += g_inv.get(&[x, w]) * lhs.get(&[x, w]);
        }
    }
    let s = trace / (n as f64 - 1.0);
    let fit = Tensor::from_fn(n, &[Down, Down], |ix| s * hbar.get(ix));
    (s, relative_residual(lhs, &fit))
}

/// `μ` with `∇_βW C̄ = μ φ(W)`: the trace ratio of two `(1,1)` tensors and
/// the residual of the proportionality.
pub fn mu_from_pair(nabla_c_bar: &Tensor, phi: &Tensor) -> (f64, f64) {
    let n = phi.dim();
    let tr = |t: &Tensor| (0..n).map(|i| t.get(&[i, i])).sum::<f64>();
    let mu = tr(nabla_c_bar) / tr(phi);
    let fit = Tensor::from_fn(n, &[Up, Down], |ix| mu * phi.get(ix));
    (mu, relative_residual(nabla_c_bar, &fit))
}

/// Left side `L(∇_γX C)(W) + ℓ(X)C(W) + ℓ(W)C(X)` from `∇_γ C` stored as
/// `[W, X]`.
pub fn c_reducible_lhs(fr: &Frame, nabla_v_c: &Tensor) -> Tensor {
    Tensor::from_fn(fr.n, &[Down, Down], |ix| {
        let (x, w) = (ix[0], ix[1]);
        fr.l * nabla_v_c.get(&[w, x]) + fr.ell.get(&[x]) * fr.c.get(&[w]) + fr.ell.get(&[w]) * fr.c.get(&[x])
    })
}

/// `𝔸(X,W) = (∇_γX C)(W) + L⁻¹{ℓ(X)C(W) + ℓ(W)C(X)}`
pub fn aux_a_bb(fr: &Frame, nabla_v_c: &Tensor) -> Tensor {
    let lhs = c_reducible_lhs(fr, nabla_v_c);
    Tensor::from_fn(fr.n, &[Down, Down], |ix| lhs.get(ix) / fr.l)
}

/// `(D°_γX C)(W) − (C² ħ(X,W) + 2C(X)C(W))/(n+1)`, stored `[W, X]`, the
/// Cartan vertical derivative of `C` on a C-reducible space.
pub fn c_reducible_nabla_c(fr: &Frame, d_c: &Tensor) -> Tensor {
    let c2 = fr.c_sq();
    Tensor::from_fn(fr.n, &[Down, Down], |ix| {
        let (w, x) = (ix[0], ix[1]);
        d_c.get(&[w, x]) - (c2 * fr.hbar.get(&[x, w]) + 2.0 * fr.c.get(&[x]) * fr.c.get(&[w])) / (fr.nf() + 1.0)
    })
}

/// `ℓ(X)C(W) + ℓ(W)C(X) + L[(D°_γX C)(W) − κ C(X)C(W)]`
pub fn c_quadratic_lhs(fr: &Frame, d_c: &Tensor, kappa: f64) -> Tensor {
    Tensor::from_fn(fr.n, &[Down, Down], |ix| {
        let (x, w) = (ix[0], ix[1]);
        fr.ell.get(&[x]) * fr.c.get(&[w])
            + fr.ell.get(&[w]) * fr.c.get(&[x])
            + fr.l * (d_c.get(&[w, x]) - kappa * fr.c.get(&[x]) * fr.c.get(&[w]))
    })
}

/// `ψ = L C²/(n+1) + α`
pub fn psi(fr: &Frame, alpha: f64) -> f64 {
    fr.l * fr.c_sq() / (fr.nf() + 1.0) + alpha
}

/// `A(X,Y) = Lℓ(X) D°_γY r + ⅔ Lℓ(Y) D°_γX r + r ℓ(X)ℓ(Y) + ⅓ L² D°_γY D°_γX r`
pub fn aux_a(fr: &Frame, r: f64, dr: &Tensor, ddr: &Tensor) -> Tensor {
    let l = fr.l;
    Tensor::from_fn(fr.n, &[Down, Down], |ix| {
        let (x, y) = (ix[0], ix[1]);
        let (lx, ly) = (fr.ell.get(&[x]), fr.ell.get(&[y]));
        l * lx * dr.get(&[y]) + 2.0 / 3.0 * l * ly * dr.get(&[x]) + r * lx * ly + l * l / 3.0 * ddr.get(&[x, y])
    })
}

/// `B(X) = r L ℓ(X) + ⅓ L² D°_γX r`
pub fn aux_b(fr: &Frame, r: f64, dr: &Tensor) -> Tensor {
    Tensor::from_fn(fr.n, &[Down], |ix| {
        r * fr.l * fr.ell.get(ix) + fr.l * fr.l / 3.0 * dr.get(ix)
    })
}

/// `M(X,Y) = Lℓ(X) D°_γY r + Lℓ(Y) D°_γX r + L² D°_γX D°_γY r`
pub fn aux_m(fr: &Frame, dr: &Tensor, ddr: &Tensor) -> Tensor {
    let l = fr.l;
    Tensor::from_fn(fr.n, &[Down, Down], |ix| {
        let (x, y) = (ix[0], ix[1]);
        l * fr.ell.get(&[x]) * dr.get(&[y]) + l * fr.ell.get(&[y]) * dr.get(&[x]) + l * l * ddr.get(&[x, y])
    })
}

/// Right side of the scalar-curvature form of `R°^i_XYZ`:
/// `𝔄_{X,Y}{[rħ(X,Z) + A(X,Z)]φ(Y) − B(X)[L⁻²ħ(Y,Z)η + L⁻¹ℓ(Y)φ(Z)]}`.
pub fn h_curvature_scalar_form(fr: &Frame, r: f64, a: &Tensor, b: &Tensor) -> Tensor {
    let l = fr.l;
    let term = |i: usize, x: usize, y: usize, z: usize| {
        (r * fr.hbar.get(&[x, z]) + a.get(&[x, z])) * fr.phi.get(&[i, y])
            - b.get(&[x]) * (fr.hbar.get(&[y, z]) * fr.y[i] / (l * l) + fr.ell.get(&[y]) * fr.phi.get(&[i, z]) / l)
    };
    Tensor::from_fn(fr.n, &[Up, Down, Down, Down], |ix| {
        let (i, x, y, z) = (ix[0], ix[1], ix[2], ix[3]);
        term(i, x, y, z) - term(i, y, x, z)
    })
}

/// `R̂(X,Y) = B(X)φ(Y) − B(Y)φ(X)`
pub fn vh_torsion_scalar_form(fr: &Frame, b: &Tensor) -> Tensor {
    Tensor::from_fn(fr.n, &[Up, Down, Down], |ix| {
        let (i, x, y) = (ix[0], ix[1], ix[2]);
        b.get(&[x]) * fr.phi.get(&[i, y]) - b.get(&[y]) * fr.phi.get(&[i, x])
    })
}

/// `R̂(X,Y) = rL{ℓ(X)Y − ℓ(Y)X}`
pub fn vh_torsion_constant_form(fr: &Frame, r: f64) -> Tensor {
    Tensor::from_fn(fr.n, &[Up, Down, Down], |ix| {
        let (i, x, y) = (ix[0], ix[1], ix[2]);
        let d = |a: usize, b: usize| (a == b) as u8 as f64;
        r * fr.l * (fr.ell.get(&[x]) * d(i, y) - fr.ell.get(&[y]) * d(i, x))
    })
}

/// `ħ(X,W) D°_γY r + ħ(Y,W) D°_γX r + ħ(X,Y) D°_γW r`, indexed `[X, Y, W]`.
fn hbar_dr_sum(fr: &Frame, dr: &Tensor) -> Tensor {
    let h = &fr.hbar;
    Tensor::from_fn(fr.n, &[Down; 3], |ix| {
        let (x, y, w) = (ix[0], ix[1], ix[2]);
        h.get(&[x, w]) * dr.get(&[y]) + h.get(&[y, w]) * dr.get(&[x]) + h.get(&[x, y]) * dr.get(&[w])
    })
}

/// Right side of the expansion of `(D°_βη 𝐏°)(Y, X, W, Z)`, indexed
/// `[Y, X, W, Z]`.
pub fn hv_derivative_scalar_form(fr: &Frame, r: f64, dr: &Tensor, m: &Tensor) -> Tensor {
    let s = hbar_dr_sum(fr, dr);
    let h = &fr.hbar;
    Tensor::from_fn(fr.n, &[Down; 4], |ix| {
        let (y, x, w, z) = (ix[0], ix[1], ix[2], ix[3]);
        2.0 / 3.0 * fr.l * fr.ell.get(&[z]) * (s.get(&[x, y, w]) + 3.0 * r * fr.t.get(&[x, y, w]))
            - (h.get(&[y, z]) * m.get(&[x, w]) + h.get(&[x, z]) * m.get(&[y, w]) + h.get(&[w, z]) * m.get(&[x, y])) / 3.0
    })
}

/// The `Z = η` specialisation, indexed `[Y, X, W]`.
pub fn hv_derivative_scalar_form_eta(fr: &Frame, r: f64, dr: &Tensor) -> Tensor {
    let s = hbar_dr_sum(fr, dr);
    Tensor::from_fn(fr.n, &[Down; 3], |ix| {
        let (y, x, w) = (ix[0], ix[1], ix[2]);
        2.0 / 3.0 * fr.l * fr.l * (s.get(&[x, y, w]) + 3.0 * r * fr.t.get(&[x, y, w]))
    })
}

/// `−1/(3r) [ħ(X,W) D°_γY r + ħ(Y,W) D°_γX r + ħ(X,Y) D°_γW r]`, the Cartan
/// tensor of a Landsberg space of non-zero scalar curvature.
pub fn landsberg_cartan_form(fr: &Frame, r: f64, dr: &Tensor) -> Tensor {
    let s = hbar_dr_sum(fr, dr);
    Tensor::from_fn(fr.n, &[Down; 3], |ix| -s.get(ix) / (3.0 * r))
}

/// `−3r/(n+1) C`
pub fn landsberg_r_gradient(fr: &Frame, r: f64) -> Tensor {
    Tensor::from_fn(fr.n, &[Down], |ix| -3.0 * r / (fr.nf() + 1.0) * fr.c.get(ix))
}

/// `L⁻¹ (D°_βη r) ℓ`
pub fn radial_part(fr: &Frame, hr: &Tensor) -> Tensor {
    let along: f64 = (0..fr.n).map(|k| fr.y[k] * hr.get(&[k])).sum();
    Tensor::from_fn(fr.n, &[Down], |ix| along / fr.l * fr.ell.get(ix))
}
