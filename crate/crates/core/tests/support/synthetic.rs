//! Hand-built inputs for the pure tensor formulas.

use finsler::analysis::checks::*;
use finsler::tensor::{Slot, Tensor};

use Slot::{Down, Up};

/// A frame at `y = L e₀` of the Euclidean metric, with the Cartan data built
/// from `c`, which must be orthogonal to `y`.
pub fn frame(n: usize, l: f64, c: &[f64], t: Tensor) -> Frame {
    let d = |a: usize, b: usize| (a == b) as u8 as f64;
    let mut y = vec![0.0; n];
    y[0] = l;
    let id = |v: &[Slot]| Tensor::from_fn(n, v, |ix| d(ix[0], ix[1]));
    Frame {
        n,
        l,
        y,
        g: id(&[Down, Down]),
        g_inv: id(&[Up, Up]),
        ell: Tensor::from_fn(n, &[Down], |ix| d(ix[0], 0)),
        hbar: Tensor::from_fn(n, &[Down, Down], |ix| d(ix[0], ix[1]) * (1.0 - d(ix[0], 0))),
        phi: Tensor::from_fn(n, &[Up, Down], |ix| d(ix[0], ix[1]) * (1.0 - d(ix[0], 0))),
        t,
        c: Tensor::from_comps(n, &[Down], c.to_vec()),
        c_up: Tensor::from_comps(n, &[Up], c.to_vec()),
    }
}

/// Residuals of the Landsberg scalar-curvature relations on a Cartan
/// tensor built to satisfy them: `(r-gradient, c-reducibility)`.
pub fn landsberg_scalar_residuals() -> (f64, f64) {
    let n = 4;
    let (r, dr) = (2.0, Tensor::from_comps(n, &[Down], vec![0.0, 0.5, -0.25, 1.0]));
    let base = frame(n, 1.0, &[0.0; 4], Tensor::zeros(n, &[Down; 3]));
    let t = landsberg_cartan_form(&base, r, &dr);
    let c: Vec<f64> = (0..n).map(|i| (0..n).map(|j| t.get(&[i, j, j])).sum()).collect();
    let fr = frame(n, 1.0, &c, t.clone());
    (
        landsberg_r_gradient(&fr, r).max_abs_diff(&dr),
        c_reducibility(&t, &fr.hbar, &fr.c, 1e-7).residual,
    )
}

/// From `L∇_γC + ℓ⊗C + C⊗ℓ = αħ` with a chosen `α`: the recovered `α`, its
/// fit residual, and the `ψ` form's scalar error and fit residual.
pub fn c_reducible_chain() -> [f64; 5] {
    let n = 3;
    let c = [0.0, 0.5, -0.25];
    let base = frame(n, 2.0, &c, Tensor::zeros(n, &[Down; 3]));
    let fr = frame(n, 2.0, &c, c_reducible_form(&base.hbar, &base.c));
    let alpha = 0.75;
    let nabla_v_c = Tensor::from_fn(n, &[Down, Down], |ix| {
        let (w, x) = (ix[0], ix[1]);
        (alpha * fr.hbar.get(&[x, w]) - fr.ell.get(&[x]) * c[w] - fr.ell.get(&[w]) * c[x]) / fr.l
    });
    let (got, res) = proportionality_to_hbar(&c_reducible_lhs(&fr, &nabla_v_c), &fr.hbar, &fr.g_inv);
    let c2 = fr.c_sq();
    let d_c = Tensor::from_fn(n, &[Down, Down], |ix| {
        let (w, x) = (ix[0], ix[1]);
        nabla_v_c.get(&[w, x]) + (c2 * fr.hbar.get(&[x, w]) + 2.0 * c[x] * c[w]) / (n as f64 + 1.0)
    });
    let vertical = c_reducible_nabla_c(&fr, &d_c).max_abs_diff(&nabla_v_c);
    let lhs = c_quadratic_lhs(&fr, &d_c, 2.0 / (n as f64 + 1.0));
    let (s, psi_res) = proportionality_to_hbar(&lhs, &fr.hbar, &fr.g_inv);
    [got - alpha, res, vertical, s - psi(&fr, alpha), psi_res]
}

/// `μ` recovered from `∇_βC̄ = 2φ` and the residual.
pub fn mu_pair() -> (f64, f64) {
    let fr = frame(3, 1.0, &[0.0; 3], Tensor::zeros(3, &[Down; 3]));
    let nabla = Tensor::from_fn(3, &[Up, Down], |ix| 2.0 * fr.phi.get(ix));
    mu_from_pair(&nabla, &fr.phi)
}
