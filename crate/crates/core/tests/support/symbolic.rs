//! Exact truncated power series over the rationals, used as an independent
//! reference for the jet engine. Coefficients are Taylor coefficients of the
//! expansion in the shifted variables `u = t − base`.

#![allow(dead_code)]

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Q = BigRational;

pub fn q(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn to_f64(v: &Q) -> f64 {
    v.to_f64().expect("finite rational")
}

#[derive(Clone, Debug, PartialEq)]
pub struct Series {
    pub nvars: usize,
    pub order: usize,
    pub coeffs: BTreeMap<Vec<u32>, Q>,
}

impl Series {
    pub fn constant(nvars: usize, order: usize, c: Q) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(vec![0; nvars], c);
        }
        Self { nvars, order, coeffs }
    }

    /// The coordinate `t_v = base + u_v`.
    pub fn variable(nvars: usize, order: usize, base: Q, v: usize) -> Self {
        let mut s = Self::constant(nvars, order, base);
        if order >= 1 {
            let mut e = vec![0; nvars];
            e[v] = 1;
            s.coeffs.insert(e, Q::one());
        }
        s
    }

    pub fn value(&self) -> Q {
        self.coeff(&vec![0; self.nvars])
    }

    pub fn coeff(&self, alpha: &[u32]) -> Q {
        self.coeffs.get(alpha).cloned().unwrap_or_else(Q::zero)
    }

    fn degree(e: &[u32]) -> usize {
        e.iter().map(|&k| k as usize).sum()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &o.coeffs {
            let slot = out.coeffs.entry(e.clone()).or_insert_with(Q::zero);
            *slot += c;
        }
        out.coeffs.retain(|_, c| !c.is_zero());
        out
    }

    pub fn scale(&self, s: &Q) -> Self {
        let mut out = self.clone();
        out.coeffs.values_mut().for_each(|c| *c *= s);
        out.coeffs.retain(|_, c| !c.is_zero());
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-Q::one()))
    }

    /// Cauchy product, truncated at `order`.
    pub fn mul(&self, o: &Self) -> Self {
        let mut coeffs: BTreeMap<Vec<u32>, Q> = BTreeMap::new();
        for (ea, ca) in &self.coeffs {
            for (eb, cb) in &o.coeffs {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                if Self::degree(&e) > self.order {
                    continue;
                }
                *coeffs.entry(e).or_insert_with(Q::zero) += ca * cb;
            }
        }
        coeffs.retain(|_, c| !c.is_zero());
        Self {
            nvars: self.nvars,
            order: self.order,
            coeffs,
        }
    }

    /// `Σ_k a_k h^k` where `h = self − value`, which has no constant term, so
    /// the sum stops at `order`.
    fn compose(&self, a: impl Fn(usize) -> Q) -> Self {
        let c0 = self.value();
        let h = self.sub(&Self::constant(self.nvars, self.order, c0));
        let mut out = Self::constant(self.nvars, self.order, Q::zero());
        let mut power = Self::constant(self.nvars, self.order, Q::one());
        for k in 0..=self.order {
            out = out.add(&power.scale(&a(k)));
            power = power.mul(&h);
        }
        out
    }

    /// Geometric series about the value. Panics at a zero value.
    pub fn recip(&self) -> Self {
        let c0 = self.value();
        assert!(!c0.is_zero(), "reciprocal of a series with zero value");
        let inv = c0.recip();
        self.compose(|k| {
            let mut a = inv.clone();
            for _ in 0..k {
                a *= -&inv;
            }
            a
        })
    }

    pub fn div(&self, o: &Self) -> Self {
        self.mul(&o.recip())
    }

    pub fn powi(&self, k: i32) -> Self {
        let base = if k < 0 { self.recip() } else { self.clone() };
        let mut out = Self::constant(self.nvars, self.order, Q::one());
        for _ in 0..k.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// Square root by the binomial series, scaled so that the result is
    /// `sqrt(self) / sqrt(scale)`. This keeps every coefficient rational when
    /// `value / scale` is a rational square; `None` otherwise.
    pub fn sqrt_scaled(&self, scale: &Q) -> Option<Self> {
        let c0 = self.value();
        assert!(c0.is_positive(), "square root of a non-positive value");
        let root = rational_sqrt(&(&c0 / scale))?;
        let inv = c0.recip();
        Some(self.compose(|k| {
            // binom(1/2, k) c0^{-k} · sqrt(c0 / scale)
            let mut a = root.clone();
            for j in 0..k {
                a *= (q(1, 2) - Q::from_integer(BigInt::from(j))) / Q::from_integer(BigInt::from(j + 1));
                a *= &inv;
            }
            a
        }))
    }

    pub fn sqrt(&self) -> Option<Self> {
        self.sqrt_scaled(&Q::one())
    }
}

fn int_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

pub fn rational_sqrt(v: &Q) -> Option<Q> {
    Some(Q::new(int_sqrt(v.numer())?, int_sqrt(v.denom())?))
}

/// Every exponent vector of total degree `≤ order` in `nvars` variables.
pub fn multi_indices(nvars: usize, order: usize) -> Vec<Vec<u32>> {
    fn rec(prefix: &mut Vec<u32>, left: usize, budget: usize, out: &mut Vec<Vec<u32>>) {
        if left == 0 {
            out.push(prefix.clone());
            return;
        }
        for k in 0..=budget {
            prefix.push(k as u32);
            rec(prefix, left - 1, budget - k, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), nvars, order, &mut out);
    out
}

#[cfg(test)]
mod self_checks {
    use super::*;

    #[test]
    fn geometric_series() {
        let t = Series::variable(1, 4, Q::zero(), 0);
        let one = Series::constant(1, 4, Q::one());
        let s = one.div(&one.sub(&t));
        for k in 0..=4 {
            assert_eq!(s.coeff(&[k]), Q::one());
        }
    }

    #[test]
    fn exact_root() {
        let t = Series::variable(1, 5, Q::zero(), 0);
        let one = Series::constant(1, 5, Q::one());
        let sq = one.add(&t).powi(2);
        assert_eq!(sq.sqrt().unwrap(), one.add(&t));
    }
}
