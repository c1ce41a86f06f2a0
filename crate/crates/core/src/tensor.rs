//! Dense tensors over an `n`-dimensional chart, at the value level
//! ([`Tensor`]) and with jet components ([`JetTensor`]).
//!
//! Components are stored row-major: the last index varies fastest.

use serde::Serialize;

use crate::jets::{Jet, JetError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Slot {
    Up,
    Down,
}

/// Odometer over all index tuples of a given rank.
pub struct Indices {
    dim: usize,
    cur: Vec<usize>,
    done: bool,
}

impl Indices {
    pub fn new(dim: usize, rank: usize) -> Self {
        Self {
            dim,
            cur: vec![0; rank],
            done: dim == 0,
        }
    }
}

impl Iterator for Indices {
    type Item = Vec<usize>;
    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.cur.clone();
        let mut k = self.cur.len();
        loop {
            if k == 0 {
                self.done = true;
                break;
            }
            k -= 1;
            self.cur[k] += 1;
            if self.cur[k] < self.dim {
                break;
            }
            self.cur[k] = 0;
        }
        Some(out)
    }
}

pub fn flat_index(dim: usize, ix: &[usize]) -> usize {
    ix.iter().fold(0, |acc, &i| {
        debug_assert!(i < dim);
        acc * dim + i
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Tensor {
    dim: usize,
    valence: Vec<Slot>,
    comps: Vec<f64>,
}

impl Tensor {
    pub fn zeros(dim: usize, valence: &[Slot]) -> Self {
        Self {
            dim,
            valence: valence.to_vec(),
            comps: vec![0.0; dim.pow(valence.len() as u32)],
        }
    }

    pub fn scalar(value: f64) -> Self {
        Self {
            dim: 0,
            valence: Vec::new(),
            comps: vec![value],
        }
    }

    pub fn from_fn(dim: usize, valence: &[Slot], mut f: impl FnMut(&[usize]) -> f64) -> Self {
        let comps = Indices::new(dim, valence.len()).map(|ix| f(&ix)).collect();
        Self {
            dim,
            valence: valence.to_vec(),
            comps,
        }
    }

    pub fn from_comps(dim: usize, valence: &[Slot], comps: Vec<f64>) -> Self {
        assert_eq!(comps.len(), dim.pow(valence.len() as u32), "component count");
        Self {
            dim,
            valence: valence.to_vec(),
            comps,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.valence.len()
    }

    pub fn valence(&self) -> &[Slot] {
        &self.valence
    }

    pub fn comps(&self) -> &[f64] {
        &self.comps
    }

    pub fn get(&self, ix: &[usize]) -> f64 {
        assert_eq!(ix.len(), self.rank(), "index arity");
        self.comps[flat_index(self.dim, ix)]
    }

    pub fn max_abs(&self) -> f64 {
        self.comps.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn max_abs_diff(&self, other: &Tensor) -> f64 {
        assert_eq!(self.comps.len(), other.comps.len(), "shape mismatch");
        self.comps
            .iter()
            .zip(&other.comps)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    /// Largest change of any component under permutations of the given slots.
    pub fn asymmetry(&self, slots: &[usize]) -> f64 {
        let mut worst: f64 = 0.0;
        for ix in Indices::new(self.dim, self.rank()) {
            let v = self.get(&ix);
            for perm in permutations(slots.len()) {
                let mut jx = ix.clone();
                for (k, &p) in perm.iter().enumerate() {
                    jx[slots[k]] = ix[slots[p]];
                }
                worst = worst.max((v - self.get(&jx)).abs());
            }
        }
        worst
    }

    /// Contracts slot `slot` with a vector (for a down slot) or covector.
    pub fn contract(&self, slot: usize, v: &[f64]) -> Tensor {
        let mut valence = self.valence.clone();
        valence.remove(slot);
        Tensor::from_fn(self.dim, &valence, |ix| {
            let mut full = ix.to_vec();
            full.insert(slot, 0);
            (0..self.dim)
                .map(|m| {
                    full[slot] = m;
                    self.get(&full) * v[m]
                })
                .sum()
        })
    }
}

/// All permutations of `0..k` (k is small here: at most 4).
pub fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    permute(&mut cur, 0, &mut out);
    out
}

fn permute(cur: &mut Vec<usize>, start: usize, out: &mut Vec<Vec<usize>>) {
    if start + 1 >= cur.len() {
        out.push(cur.clone());
        return;
    }
    for i in start..cur.len() {
        cur.swap(start, i);
        permute(cur, start + 1, out);
        cur.swap(start, i);
    }
}

/// A tensor whose components are jets about a common base point.
#[derive(Debug, Clone)]
pub struct JetTensor {
    dim: usize,
    valence: Vec<Slot>,
    comps: Vec<Jet>,
}

impl JetTensor {
    pub fn from_comps(dim: usize, valence: &[Slot], comps: Vec<Jet>) -> Self {
        assert_eq!(comps.len(), dim.pow(valence.len() as u32), "component count");
        Self {
            dim,
            valence: valence.to_vec(),
            comps,
        }
    }

    pub fn from_fn(dim: usize, valence: &[Slot], mut f: impl FnMut(&[usize]) -> Jet) -> Self {
        let comps = Indices::new(dim, valence.len()).map(|ix| f(&ix)).collect();
        Self {
            dim,
            valence: valence.to_vec(),
            comps,
        }
    }

    pub fn try_from_fn<E>(
        dim: usize,
        valence: &[Slot],
        mut f: impl FnMut(&[usize]) -> Result<Jet, E>,
    ) -> Result<Self, E> {
        let comps = Indices::new(dim, valence.len())
            .map(|ix| f(&ix))
            .collect::<Result<_, _>>()?;
        Ok(Self {
            dim,
            valence: valence.to_vec(),
            comps,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.valence.len()
    }

    pub fn valence(&self) -> &[Slot] {
        &self.valence
    }

    pub fn comps(&self) -> &[Jet] {
        &self.comps
    }

    pub fn get(&self, ix: &[usize]) -> &Jet {
        &self.comps[flat_index(self.dim, ix)]
    }

    /// Lowest jet order among the components.
    pub fn order(&self) -> usize {
        self.comps.iter().map(Jet::order).min().unwrap_or(0)
    }

    pub fn value(&self) -> Tensor {
        Tensor {
            dim: self.dim,
            valence: self.valence.clone(),
            comps: self.comps.iter().map(Jet::value).collect(),
        }
    }

    /// Componentwise partial derivative with respect to jet variable `v`.
    pub fn diff(&self, v: usize) -> Result<JetTensor, JetError> {
        Ok(JetTensor {
            dim: self.dim,
            valence: self.valence.clone(),
            comps: self
                .comps
                .iter()
                .map(|c| c.try_diff(v))
                .collect::<Result<_, _>>()?,
        })
    }
}

/// Inverse of an `n × n` matrix of jets (row-major) by Gauss–Jordan
/// elimination, pivoting on the magnitude of the value parts.
pub fn invert_jet_matrix(m: &[Jet], n: usize) -> Result<Vec<Jet>, JetError> {
    assert_eq!(m.len(), n * n);
    let one = m[0].constant_like(1.0);
    let zero = m[0].zero_like();
    let mut a: Vec<Jet> = m.to_vec();
    let mut inv: Vec<Jet> = (0..n * n)
        .map(|k| if k / n == k % n { one.clone() } else { zero.clone() })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&r, &s| {
                a[r * n + col]
                    .value()
                    .abs()
                    .total_cmp(&a[s * n + col].value().abs())
            })
            .expect("non-empty range");
        if pivot != col {
            for k in 0..n {
                a.swap(pivot * n + k, col * n + k);
                inv.swap(pivot * n + k, col * n + k);
            }
        }
        let p = a[col * n + col].recip().map_err(|e| match e {
            JetError::Domain { value, .. } => JetError::Domain {
                op: "matrix inversion",
                value,
                context: Some("zero pivot".into()),
            },
            e => e,
        })?;
        for k in 0..n {
            a[col * n + k] = &a[col * n + k] * &p;
            inv[col * n + k] = &inv[col * n + k] * &p;
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let factor = a[r * n + col].clone();
            for k in 0..n {
                let da = &factor * &a[col * n + k];
                a[r * n + k] -= &da;
                let di = &factor * &inv[col * n + k];
                inv[r * n + k] -= &di;
            }
        }
    }
    Ok(inv)
}
