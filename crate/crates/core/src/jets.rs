//! Truncated multivariate Taylor arithmetic ("jets").
//!
//! A [`Jet`] stores the Taylor coefficients `∂^α f(base) / α!` of a scalar
//! function for every multi-index `α` of total degree at most the jet order.
//! Coefficients are kept densely, ranked in graded order: all monomials of
//! degree 0, then degree 1, and so on. Because of that layout a jet of order
//! `k` is always a prefix of the same function's jet of order `k + 1`, so
//! differentiation simply shortens the coefficient vector.
//!
//! The supported operations (`+ - * /`, integer and real powers, `sqrt`,
//! `exp`, `ln`) are exact through the declared order: no truncation error is
//! introduced below it.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::{Arc, Mutex, OnceLock};

use crate::metrics::ChartPoint;

/// Jet order used by [`lift`] callers that have no stronger requirement.
pub const DEFAULT_JET_ORDER: usize = 6;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum JetError {
    #[error("{op} evaluated at {value}, outside its domain{}", fmt_context(.context))]
    Domain {
        op: &'static str,
        value: f64,
        context: Option<String>,
    },
    #[error("incompatible jets: {0}")]
    Mismatch(String),
    #[error("multi-index of degree {degree} exceeds jet order {order}")]
    OutOfOrder { degree: usize, order: usize },
    #[error("multi-index has {got} slots but the jet has {expected} variables")]
    Arity { expected: usize, got: usize },
}

fn fmt_context(context: &Option<String>) -> String {
    match context {
        Some(c) => format!(" (in `{c}`)"),
        None => String::new(),
    }
}

impl JetError {
    /// Attaches the sub-expression that produced a domain violation. The
    /// innermost context wins, so nested calls keep the most specific label.
    pub fn in_expr(self, expr: impl Into<String>) -> Self {
        match self {
            JetError::Domain {
                op,
                value,
                context: None,
            } => JetError::Domain {
                op,
                value,
                context: Some(expr.into()),
            },
            other => other,
        }
    }
}

/// Exponents of a monomial, one slot per jet variable. For chart jets the
/// first `n` slots belong to `x` and the last `n` to `y`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex {
    exponents: Vec<u32>,
}

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        Self { exponents }
    }

    pub fn zero(nvars: usize) -> Self {
        Self {
            exponents: vec![0; nvars],
        }
    }

    /// Unit multi-index `e_v`.
    pub fn unit(nvars: usize, v: usize) -> Self {
        let mut e = vec![0; nvars];
        e[v] = 1;
        Self { exponents: e }
    }

    /// Multi-index of a chart derivative `∂^a/∂x^a ∂^b/∂y^b`, given as lists of
    /// differentiated x- and y-slots (repeats allowed).
    pub fn chart(n: usize, x_slots: &[usize], y_slots: &[usize]) -> Self {
        let mut e = vec![0; 2 * n];
        for &i in x_slots {
            e[i] += 1;
        }
        for &i in y_slots {
            e[n + i] += 1;
        }
        Self { exponents: e }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn total_degree(&self) -> usize {
        self.exponents.iter().map(|&e| e as usize).sum()
    }

    /// `α! = Π α_i!`
    pub fn factorial(&self) -> f64 {
        self.exponents
            .iter()
            .map(|&e| (1..=e).map(f64::from).product::<f64>())
            .product()
    }
}

/// Monomial bookkeeping shared by every jet with the same variable count and
/// order: graded ranking, derivative successors and the truncated product
/// table.
pub struct JetSpace {
    nvars: usize,
    order: usize,
    exps: Vec<u8>,
    degree: Vec<u8>,
    count_upto: Vec<usize>,
    index: HashMap<Vec<u8>, usize>,
    // succ[rank * nvars + v] = rank of α + e_v, or NONE past the order.
    succ: Vec<u32>,
    row_start: Vec<usize>,
    pairs: Vec<(u32, u32)>,
}

const NONE: u32 = u32::MAX;

impl fmt::Debug for JetSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("JetSpace")
            .field("nvars", &self.nvars)
            .field("order", &self.order)
            .field("len", &self.len())
            .finish()
    }
}

fn push_monomials(nvars: usize, degree: usize, prefix: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
    if prefix.len() + 1 == nvars {
        prefix.push(degree as u8);
        out.push(prefix.clone());
        prefix.pop();
        return;
    }
    for e in (0..=degree).rev() {
        prefix.push(e as u8);
        push_monomials(nvars, degree - e, prefix, out);
        prefix.pop();
    }
}

impl JetSpace {
    fn build(nvars: usize, order: usize) -> Self {
        assert!(nvars >= 1, "a jet space needs at least one variable");
        assert!(order < 64, "jet order {order} is unreasonably large");
        let mut monomials = Vec::new();
        let mut count_upto = Vec::with_capacity(order + 1);
        for d in 0..=order {
            push_monomials(nvars, d, &mut Vec::with_capacity(nvars), &mut monomials);
            count_upto.push(monomials.len());
        }
        let len = monomials.len();
        let index: HashMap<Vec<u8>, usize> = monomials
            .iter()
            .enumerate()
            .map(|(r, m)| (m.clone(), r))
            .collect();
        let degree: Vec<u8> = monomials
            .iter()
            .map(|m| m.iter().map(|&e| e as u32).sum::<u32>() as u8)
            .collect();

        let mut succ = vec![NONE; len * nvars];
        for (r, m) in monomials.iter().enumerate() {
            if degree[r] as usize == order {
                continue;
            }
            let mut bumped = m.clone();
            for v in 0..nvars {
                bumped[v] += 1;
                succ[r * nvars + v] = index[&bumped] as u32;
                bumped[v] -= 1;
            }
        }

        let mut row_start = Vec::with_capacity(len + 1);
        let mut pairs = Vec::new();
        let mut sum = vec![0u8; nvars];
        for (i, mi) in monomials.iter().enumerate() {
            row_start.push(pairs.len());
            let room = order - degree[i] as usize;
            for (j, mj) in monomials[..count_upto[room]].iter().enumerate() {
                for v in 0..nvars {
                    sum[v] = mi[v] + mj[v];
                }
                pairs.push((j as u32, index[&sum] as u32));
            }
        }
        row_start.push(pairs.len());

        let exps = monomials.into_iter().flatten().collect();
        Self {
            nvars,
            order,
            exps,
            degree,
            count_upto,
            index,
            succ,
            row_start,
            pairs,
        }
    }

    /// Shared space for `nvars` variables truncated at `order`. Spaces are
    /// built once per process and cached.
    pub fn get(nvars: usize, order: usize) -> Arc<JetSpace> {
        static CACHE: OnceLock<Mutex<HashMap<(usize, usize), Arc<JetSpace>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
        guard
            .entry((nvars, order))
            .or_insert_with(|| Arc::new(JetSpace::build(nvars, order)))
            .clone()
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Number of monomials of degree at most the space order.
    pub fn len(&self) -> usize {
        self.degree.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degree.is_empty()
    }

    /// Number of monomials of degree `≤ d`.
    pub fn count_upto(&self, d: usize) -> usize {
        self.count_upto[d.min(self.order)]
    }

    pub fn rank_of(&self, alpha: &MultiIndex) -> Option<usize> {
        if alpha.exponents.len() != self.nvars || alpha.total_degree() > self.order {
            return None;
        }
        let key: Vec<u8> = alpha.exponents.iter().map(|&e| e as u8).collect();
        self.index.get(&key).copied()
    }

    pub fn multi_index(&self, rank: usize) -> MultiIndex {
        let e = &self.exps[rank * self.nvars..(rank + 1) * self.nvars];
        MultiIndex::new(e.iter().map(|&v| v as u32).collect())
    }

    pub fn degree_of(&self, rank: usize) -> usize {
        self.degree[rank] as usize
    }
}

/// Truncated Taylor expansion of a scalar function about a base point.
#[derive(Clone)]
pub struct Jet {
    space: Arc<JetSpace>,
    base: Arc<[f64]>,
    order: usize,
    coeffs: Vec<f64>,
}

impl fmt::Debug for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Jet")
            .field("nvars", &self.space.nvars)
            .field("order", &self.order)
            .field("value", &self.value())
            .finish()
    }
}

impl Jet {
    pub fn constant(space: &Arc<JetSpace>, base: &Arc<[f64]>, value: f64) -> Self {
        assert_eq!(base.len(), space.nvars, "base point arity");
        let mut coeffs = vec![0.0; space.len()];
        coeffs[0] = value;
        Self {
            space: space.clone(),
            base: base.clone(),
            order: space.order,
            coeffs,
        }
    }

    /// The coordinate function `t ↦ t_v`, expanded about `base`.
    pub fn variable(space: &Arc<JetSpace>, base: &Arc<[f64]>, v: usize) -> Self {
        assert!(v < space.nvars, "variable index out of range");
        let mut j = Self::constant(space, base, base[v]);
        if space.order >= 1 {
            j.coeffs[1 + v] = 1.0;
        }
        j
    }

    /// Builds a jet directly from graded coefficients.
    pub fn from_coeffs(
        space: &Arc<JetSpace>,
        base: &Arc<[f64]>,
        order: usize,
        coeffs: Vec<f64>,
    ) -> Result<Self, JetError> {
        if order > space.order || coeffs.len() != space.count_upto(order) {
            return Err(JetError::Mismatch(format!(
                "{} coefficients do not describe an order-{order} jet",
                coeffs.len()
            )));
        }
        Ok(Self {
            space: space.clone(),
            base: base.clone(),
            order,
            coeffs,
        })
    }

    /// Same base and space, constant value.
    pub fn constant_like(&self, value: f64) -> Self {
        let mut coeffs = vec![0.0; self.coeffs.len()];
        coeffs[0] = value;
        Self {
            space: self.space.clone(),
            base: self.base.clone(),
            order: self.order,
            coeffs,
        }
    }

    pub fn zero_like(&self) -> Self {
        self.constant_like(0.0)
    }

    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    /// Order through which the coefficients are exact.
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn nvars(&self) -> usize {
        self.space.nvars
    }

    pub fn base(&self) -> &[f64] {
        &self.base
    }

    pub fn space(&self) -> &Arc<JetSpace> {
        &self.space
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    fn check_index(&self, alpha: &MultiIndex) -> Result<usize, JetError> {
        if alpha.exponents.len() != self.space.nvars {
            return Err(JetError::Arity {
                expected: self.space.nvars,
                got: alpha.exponents.len(),
            });
        }
        let degree = alpha.total_degree();
        if degree > self.order {
            return Err(JetError::OutOfOrder {
                degree,
                order: self.order,
            });
        }
        Ok(self.space.rank_of(alpha).expect("degree already checked"))
    }

    /// Taylor coefficient `∂^α f / α!`.
    pub fn coeff(&self, alpha: &MultiIndex) -> Result<f64, JetError> {
        Ok(self.coeffs[self.check_index(alpha)?])
    }

    /// Raw partial derivative `∂^α f(base)`.
    pub fn partial(&self, alpha: &MultiIndex) -> Result<f64, JetError> {
        Ok(self.coeff(alpha)? * alpha.factorial())
    }

    /// Drops every coefficient above `order`.
    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order);
        Self {
            space: self.space.clone(),
            base: self.base.clone(),
            order,
            coeffs: self.coeffs[..self.space.count_upto(order)].to_vec(),
        }
    }

    /// Partial derivative with respect to variable `v`; the result is exact
    /// through one order less.
    ///
    /// Panics on an order-0 jet, which carries no derivative information.
    pub fn diff(&self, v: usize) -> Self {
        self.try_diff(v).unwrap_or_else(|e| panic!("{e}"))
    }

    pub fn try_diff(&self, v: usize) -> Result<Self, JetError> {
        if v >= self.space.nvars {
            return Err(JetError::Arity {
                expected: self.space.nvars,
                got: v + 1,
            });
        }
        if self.order == 0 {
            return Err(JetError::OutOfOrder {
                degree: 1,
                order: 0,
            });
        }
        let order = self.order - 1;
        let len = self.space.count_upto(order);
        let nv = self.space.nvars;
        let mut coeffs = Vec::with_capacity(len);
        for r in 0..len {
            let s = self.space.succ[r * nv + v] as usize;
            let e = self.space.exps[r * nv + v] as f64;
            coeffs.push((e + 1.0) * self.coeffs[s]);
        }
        Ok(Self {
            space: self.space.clone(),
            base: self.base.clone(),
            order,
            coeffs,
        })
    }

    pub fn is_compatible(&self, other: &Jet) -> bool {
        (Arc::ptr_eq(&self.space, &other.space)
            || (self.space.nvars == other.space.nvars && self.space.order == other.space.order))
            && (Arc::ptr_eq(&self.base, &other.base) || self.base[..] == other.base[..])
    }

    fn assert_compatible(&self, other: &Jet) {
        assert!(
            self.is_compatible(other),
            "jet operands differ in space or base point"
        );
    }

    fn mul_coeffs(&self, other: &Jet) -> (usize, Vec<f64>) {
        let order = self.order.min(other.order);
        let sp = &self.space;
        let len = sp.count_upto(order);
        let mut out = vec![0.0; len];
        let (a, b) = (&self.coeffs, &other.coeffs);
        for i in 0..len {
            let ai = a[i];
            if ai == 0.0 {
                continue;
            }
            let lim = sp.count_upto(order - sp.degree[i] as usize);
            let row = &sp.pairs[sp.row_start[i]..sp.row_start[i] + lim];
            for &(j, k) in row {
                out[k as usize] += ai * b[j as usize];
            }
        }
        (order, out)
    }

    /// `Σ_k c_k (f − f(base))^k`, the composition of a power series with the
    /// non-constant part of `self`.
    fn compose(&self, series: &[f64]) -> Self {
        let mut tail = self.clone();
        tail.coeffs[0] = 0.0;
        let k = self.order.min(series.len() - 1);
        let mut acc = self.constant_like(series[k]);
        for c in series[..k].iter().rev() {
            acc = &acc * &tail;
            acc.coeffs[0] += c;
        }
        acc
    }

    pub fn recip(&self) -> Result<Self, JetError> {
        let a0 = self.value();
        if a0 == 0.0 || !a0.is_finite() {
            return Err(JetError::Domain {
                op: "reciprocal",
                value: a0,
                context: None,
            });
        }
        let series: Vec<f64> = (0..=self.order)
            .map(|k| {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                sign / a0.powi(k as i32 + 1)
            })
            .collect();
        Ok(self.compose(&series))
    }

    pub fn checked_div(&self, other: &Jet) -> Result<Self, JetError> {
        self.assert_compatible(other);
        let inv = other.recip().map_err(|e| match e {
            JetError::Domain { value, context, .. } => JetError::Domain {
                op: "division",
                value,
                context,
            },
            e => e,
        })?;
        Ok(self * &inv)
    }

    pub fn sqrt(&self) -> Result<Self, JetError> {
        let a0 = self.value();
        if a0 <= 0.0 || !a0.is_finite() {
            return Err(JetError::Domain {
                op: "sqrt",
                value: a0,
                context: None,
            });
        }
        self.powf(0.5).map_err(|e| match e {
            JetError::Domain { value, context, .. } => JetError::Domain {
                op: "sqrt",
                value,
                context,
            },
            e => e,
        })
    }

    pub fn powi(&self, n: i32) -> Result<Self, JetError> {
        if n < 0 {
            return self.recip()?.powi(-n);
        }
        let mut result = self.constant_like(1.0);
        let mut square = self.clone();
        let mut e = n as u32;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &square;
            }
            e >>= 1;
            if e > 0 {
                square = &square * &square;
            }
        }
        Ok(result)
    }

    /// Real power. Integer exponents are exact at any base value; other
    /// exponents need a positive base value.
    pub fn powf(&self, p: f64) -> Result<Self, JetError> {
        if p.fract() == 0.0 && p.abs() < i32::MAX as f64 {
            return self.powi(p as i32);
        }
        let a0 = self.value();
        if a0 <= 0.0 || !a0.is_finite() {
            return Err(JetError::Domain {
                op: "power",
                value: a0,
                context: None,
            });
        }
        let mut series = Vec::with_capacity(self.order + 1);
        let mut c = a0.powf(p);
        for k in 0..=self.order {
            series.push(c);
            c *= (p - k as f64) / ((k + 1) as f64 * a0);
        }
        Ok(self.compose(&series))
    }

    pub fn exp(&self) -> Self {
        let e0 = self.value().exp();
        let mut series = Vec::with_capacity(self.order + 1);
        let mut fact = 1.0;
        for k in 0..=self.order {
            if k > 0 {
                fact *= k as f64;
            }
            series.push(e0 / fact);
        }
        self.compose(&series)
    }

    pub fn ln(&self) -> Result<Self, JetError> {
        let a0 = self.value();
        if a0 <= 0.0 || !a0.is_finite() {
            return Err(JetError::Domain {
                op: "ln",
                value: a0,
                context: None,
            });
        }
        let mut series = vec![a0.ln()];
        for k in 1..=self.order {
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            series.push(sign / (k as f64 * a0.powi(k as i32)));
        }
        Ok(self.compose(&series))
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = self.clone();
        out.coeffs.iter_mut().for_each(|c| *c *= s);
        out
    }
}

fn add_coeffs(a: &Jet, b: &Jet, sign: f64) -> Jet {
    a.assert_compatible(b);
    let order = a.order.min(b.order);
    let len = a.space.count_upto(order);
    let coeffs = a.coeffs[..len]
        .iter()
        .zip(&b.coeffs[..len])
        .map(|(x, y)| x + sign * y)
        .collect();
    Jet {
        space: a.space.clone(),
        base: a.base.clone(),
        order,
        coeffs,
    }
}

impl Add<&Jet> for &Jet {
    type Output = Jet;
    fn add(self, rhs: &Jet) -> Jet {
        add_coeffs(self, rhs, 1.0)
    }
}

impl Sub<&Jet> for &Jet {
    type Output = Jet;
    fn sub(self, rhs: &Jet) -> Jet {
        add_coeffs(self, rhs, -1.0)
    }
}

impl Mul<&Jet> for &Jet {
    type Output = Jet;
    fn mul(self, rhs: &Jet) -> Jet {
        self.assert_compatible(rhs);
        let (order, coeffs) = self.mul_coeffs(rhs);
        Jet {
            space: self.space.clone(),
            base: self.base.clone(),
            order,
            coeffs,
        }
    }
}

macro_rules! owned_binops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<Jet> for Jet {
            type Output = Jet;
            fn $m(self, rhs: Jet) -> Jet { (&self).$m(&rhs) }
        }
        impl $tr<&Jet> for Jet {
            type Output = Jet;
            fn $m(self, rhs: &Jet) -> Jet { (&self).$m(rhs) }
        }
        impl $tr<Jet> for &Jet {
            type Output = Jet;
            fn $m(self, rhs: Jet) -> Jet { self.$m(&rhs) }
        }
    )*};
}
owned_binops!(Add add, Sub sub, Mul mul);

impl AddAssign<&Jet> for Jet {
    fn add_assign(&mut self, rhs: &Jet) {
        self.assert_compatible(rhs);
        if rhs.order < self.order {
            self.order = rhs.order;
            self.coeffs.truncate(self.space.count_upto(rhs.order));
        }
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
    }
}

impl SubAssign<&Jet> for Jet {
    fn sub_assign(&mut self, rhs: &Jet) {
        self.assert_compatible(rhs);
        if rhs.order < self.order {
            self.order = rhs.order;
            self.coeffs.truncate(self.space.count_upto(rhs.order));
        }
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a -= b;
        }
    }
}

impl AddAssign<Jet> for Jet {
    fn add_assign(&mut self, rhs: Jet) {
        *self += &rhs;
    }
}

impl SubAssign<Jet> for Jet {
    fn sub_assign(&mut self, rhs: Jet) {
        *self -= &rhs;
    }
}

impl MulAssign<f64> for Jet {
    fn mul_assign(&mut self, rhs: f64) {
        self.coeffs.iter_mut().for_each(|c| *c *= rhs);
    }
}

impl Add<f64> for &Jet {
    type Output = Jet;
    fn add(self, rhs: f64) -> Jet {
        let mut out = self.clone();
        out.coeffs[0] += rhs;
        out
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(mut self, rhs: f64) -> Jet {
        self.coeffs[0] += rhs;
        self
    }
}

impl Sub<f64> for &Jet {
    type Output = Jet;
    fn sub(self, rhs: f64) -> Jet {
        self + (-rhs)
    }
}

impl Sub<f64> for Jet {
    type Output = Jet;
    fn sub(self, rhs: f64) -> Jet {
        self + (-rhs)
    }
}

impl Mul<f64> for &Jet {
    type Output = Jet;
    fn mul(self, rhs: f64) -> Jet {
        self.scale(rhs)
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(mut self, rhs: f64) -> Jet {
        self *= rhs;
        self
    }
}

impl Mul<&Jet> for f64 {
    type Output = Jet;
    fn mul(self, rhs: &Jet) -> Jet {
        rhs.scale(self)
    }
}

impl Mul<Jet> for f64 {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        rhs * self
    }
}

impl Sub<&Jet> for f64 {
    type Output = Jet;
    fn sub(self, rhs: &Jet) -> Jet {
        -rhs + self
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self * -1.0
    }
}

/// Identity-lifted chart coordinates: `x_i` is jet variable `i`, `y_i` is jet
/// variable `n + i`.
#[derive(Debug, Clone)]
pub struct LiftedPoint {
    pub x: Vec<Jet>,
    pub y: Vec<Jet>,
}

impl LiftedPoint {
    pub fn new(point: &ChartPoint, order: usize) -> Self {
        let n = point.dim();
        let space = JetSpace::get(2 * n, order);
        let base: Arc<[f64]> = point.x.iter().chain(&point.y).copied().collect();
        let x = (0..n).map(|i| Jet::variable(&space, &base, i)).collect();
        let y = (0..n).map(|i| Jet::variable(&space, &base, n + i)).collect();
        Self { x, y }
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }

    pub fn order(&self) -> usize {
        self.x[0].order()
    }

    pub fn constant(&self, value: f64) -> Jet {
        self.x[0].constant_like(value)
    }
}

/// Expands `f(x, y)` about a chart point through `order`.
pub fn lift<F>(f: F, base: &ChartPoint, order: usize) -> Result<Jet, JetError>
where
    F: Fn(&[Jet], &[Jet]) -> Result<Jet, JetError>,
{
    let lifted = LiftedPoint::new(base, order);
    f(&lifted.x, &lifted.y)
}

/// Raw partial derivative of a jet; see [`Jet::partial`].
pub fn partial(j: &Jet, alpha: &MultiIndex) -> Result<f64, JetError> {
    j.partial(alpha)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JetOp {
    Add,
    Sub,
    Mul,
    Div,
    /// `a^b`; a constant exponent jet uses the real-power series, otherwise
    /// `exp(b ln a)`.
    Pow,
    /// Unary: `sqrt(a)`. `b` must still be compatible with `a`.
    Sqrt,
}

/// Checked binary jet arithmetic: operands must share base point and order.
pub fn jet_arith(a: &Jet, b: &Jet, op: JetOp) -> Result<Jet, JetError> {
    if !a.is_compatible(b) {
        return Err(JetError::Mismatch(
            "operands are expanded in different spaces or about different base points".into(),
        ));
    }
    if a.order != b.order {
        return Err(JetError::Mismatch(format!(
            "operand orders differ ({} vs {})",
            a.order, b.order
        )));
    }
    match op {
        JetOp::Add => Ok(a + b),
        JetOp::Sub => Ok(a - b),
        JetOp::Mul => Ok(a * b),
        JetOp::Div => a.checked_div(b),
        JetOp::Pow => {
            if b.coeffs[1..].iter().all(|&c| c == 0.0) {
                a.powf(b.value())
            } else {
                Ok((b * &a.ln()?).exp())
            }
        }
        JetOp::Sqrt => a.sqrt(),
    }
}

/// Relative defect of Euler's relation `Σ y^i ∂h/∂y^i = m h` for a chart jet
/// `h` expanded in `2n` variables (y occupies the last `n`).
pub fn euler_defect(h: &Jet, degree: f64) -> f64 {
    let nv = h.nvars();
    let n = nv / 2;
    let lhs: f64 = (0..n)
        .map(|i| h.base()[n + i] * h.coeffs[1 + n + i])
        .sum();
    let rhs = degree * h.value();
    (lhs - rhs).abs() / rhs.abs().max(lhs.abs()).max(1e-300)
}
