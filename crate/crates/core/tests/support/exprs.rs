//! Random rational/algebraic expressions, evaluated both as jets and as
//! exact series.

#![allow(dead_code)]

use std::sync::Arc;

use finsler::jets::{Jet, JetSpace};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::symbolic::{multi_indices, q, to_f64, Series, Q};

#[derive(Clone, Debug)]
pub enum Expr {
    Var(usize),
    /// `num / 4`
    Const(i64),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
    Sqrt(Box<Expr>),
}

use Expr::*;

fn b(e: Expr) -> Box<Expr> {
    Box::new(e)
}

/// A base point with coordinates in `¼ℤ`, exactly representable.
pub struct Problem {
    pub expr: Expr,
    pub base: Vec<i64>,
    pub order: usize,
}

fn leaf(rng: &mut ChaCha8Rng, nvars: usize) -> Expr {
    if rng.random_bool(0.6) {
        Var(rng.random_range(0..nvars))
    } else {
        Const(rng.random_range(-8..=8))
    }
}

fn gen(rng: &mut ChaCha8Rng, nvars: usize, base: &[i64], depth: usize) -> Expr {
    if depth == 0 {
        return leaf(rng, nvars);
    }
    let sub = |rng: &mut ChaCha8Rng| b(gen(rng, nvars, base, depth - 1));
    match rng.random_range(0..7) {
        0 => Add(sub(rng), sub(rng)),
        1 => Sub(sub(rng), sub(rng)),
        2 | 3 => Mul(sub(rng), sub(rng)),
        4 => {
            // 1 + e² never vanishes.
            let e = sub(rng);
            Div(sub(rng), b(Add(b(Const(4)), b(Mul(e.clone(), e)))))
        }
        5 => Pow(sub(rng), rng.random_range(2..=3)),
        _ => {
            // sqrt(p² + (t_v − base_v)·e): the value at the base is a
            // rational square, so the exact series stays rational.
            let v = rng.random_range(0..nvars);
            let p = rng.random_range(1..=3) * 4;
            let shifted = Sub(b(Var(v)), b(Const(base[v])));
            Sqrt(b(Add(b(Const(p * p / 4)), b(Mul(b(shifted), sub(rng))))))
        }
    }
}

pub fn random_problem(seed: u64, nvars: usize, order: usize) -> Problem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base: Vec<i64> = (0..nvars).map(|_| rng.random_range(-6..=6)).collect();
    let expr = gen(&mut rng, nvars, &base, 3);
    Problem { expr, base, order }
}

pub fn eval_jet(e: &Expr, space: &Arc<JetSpace>, base: &Arc<[f64]>) -> Jet {
    let r = |e: &Expr| eval_jet(e, space, base);
    match e {
        Var(v) => Jet::variable(space, base, *v),
        Const(c) => Jet::constant(space, base, *c as f64 / 4.0),
        Add(a, c) => r(a) + r(c),
        Sub(a, c) => r(a) - r(c),
        Mul(a, c) => r(a) * r(c),
        Div(a, c) => r(a).checked_div(&r(c)).expect("denominator is positive"),
        Pow(a, k) => r(a).powi(*k).expect("integer power"),
        Sqrt(a) => r(a).sqrt().expect("radicand is positive"),
    }
}

pub fn eval_series(e: &Expr, nvars: usize, order: usize, base: &[i64]) -> Series {
    let r = |e: &Expr| eval_series(e, nvars, order, base);
    match e {
        Var(v) => Series::variable(nvars, order, q(base[*v], 4), *v),
        Const(c) => Series::constant(nvars, order, q(*c, 4)),
        Add(a, c) => r(a).add(&r(c)),
        Sub(a, c) => r(a).sub(&r(c)),
        Mul(a, c) => r(a).mul(&r(c)),
        Div(a, c) => r(a).div(&r(c)),
        Pow(a, k) => r(a).powi(*k),
        Sqrt(a) => r(a).sqrt().expect("rational square at the base"),
    }
}

/// `max_α |jet_α − oracle_α| / max(1, max_α |oracle_α|)` over all Taylor
/// coefficients through `order`.
pub fn coefficient_error(jet: &Jet, oracle: &Series) -> f64 {
    let mut scale: f64 = 1.0;
    let mut worst: f64 = 0.0;
    for alpha in multi_indices(oracle.nvars, oracle.order) {
        let want = to_f64(&oracle.coeff(&alpha));
        let mi = finsler::jets::MultiIndex::new(alpha);
        let got = jet.coeff(&mi).expect("index within order");
        scale = scale.max(want.abs());
        worst = worst.max((got - want).abs());
    }
    worst / scale
}

pub fn check_problem(p: &Problem) -> f64 {
    let nvars = p.base.len();
    let space = JetSpace::get(nvars, p.order);
    let base: Arc<[f64]> = p.base.iter().map(|&v| v as f64 / 4.0).collect();
    let jet = eval_jet(&p.expr, &space, &base);
    let oracle = eval_series(&p.expr, nvars, p.order, &p.base);
    coefficient_error(&jet, &oracle)
}

pub fn zero() -> Q {
    q(0, 1)
}
