//! Sparse symmetric tensors keyed by canonical multi-indices.

use std::collections::BTreeMap;

use nalgebra::DMatrix;

use crate::error::{Result, TensorError};
use crate::index::{canonical_count, canonical_indices, MultiIndex};
#[cfg(test)]
use crate::index::CanonicalIndices;

/// An order-`m`, dimension-`n` real symmetric tensor.
///
/// Only nonzero values are stored, one per canonical (sorted) index. Lookups
/// by any permutation of an index tuple return the same value.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricTensor {
    order: usize,
    dim: usize,
    entries: BTreeMap<MultiIndex, f64>,
}

/// Result of contracting a tensor with `l` copies of a vector.
#[derive(Debug, Clone, PartialEq)]
pub enum Contraction {
    /// `l = m`: the form value `A x^m`.
    Scalar(f64),
    /// `l = m - 1`: the vector `A x^{m-1}`.
    Vector(Vec<f64>),
    /// `l <= m - 2`: a symmetric tensor of order `m - l`.
    Tensor(SymmetricTensor),
}

impl SymmetricTensor {
    pub fn zeros(order: usize, dim: usize) -> Result<Self> {
        if order < 2 {
            return Err(TensorError::InvalidShape(format!(
                "order must be at least 2, got {order}"
            )));
        }
        if dim < 1 {
            return Err(TensorError::InvalidShape("dimension must be positive".into()));
        }
        Ok(Self {
            order,
            dim,
            entries: BTreeMap::new(),
        })
    }

    /// Fills every canonical index from `f` (called with sorted 0-based indices).
    pub fn from_fn(order: usize, dim: usize, mut f: impl FnMut(&[usize]) -> f64) -> Result<Self> {
        let mut t = Self::zeros(order, dim)?;
        for idx in canonical_indices(order, dim) {
            let v = f(idx.indices());
            if v != 0.0 {
                t.entries.insert(idx, v);
            }
        }
        Ok(t)
    }

    /// Builds from `(tuple, value)` pairs; tuples may be in any order.
    /// Repeated canonical keys are rejected.
    pub fn from_entries<I>(order: usize, dim: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<usize>, f64)>,
    {
        let mut t = Self::zeros(order, dim)?;
        for (idx, v) in entries {
            t.check_tuple(&idx)?;
            let key = MultiIndex::new(&idx);
            if t.entries.contains_key(&key) {
                return Err(TensorError::Parse(format!("duplicate entry {key}")));
            }
            if v != 0.0 {
                t.entries.insert(key, v);
            }
        }
        Ok(t)
    }

    /// All-ones tensor `e^m`.
    pub fn ones(order: usize, dim: usize) -> Result<Self> {
        Self::from_fn(order, dim, |_| 1.0)
    }

    /// Identity tensor: ones on the diagonal.
    pub fn identity(order: usize, dim: usize) -> Result<Self> {
        Self::from_fn(order, dim, |idx| if idx[0] == idx[idx.len() - 1] { 1.0 } else { 0.0 })
    }

    /// Diagonal tensor with the given diagonal.
    pub fn diagonal(order: usize, diag: &[f64]) -> Result<Self> {
        Self::from_fn(order, diag.len(), |idx| {
            if idx[0] == idx[idx.len() - 1] {
                diag[idx[0]]
            } else {
                0.0
            }
        })
    }

    /// Returns a copy with one entry replaced.
    pub fn with_entry(mut self, idx: &[usize], value: f64) -> Result<Self> {
        self.check_tuple(idx)?;
        let key = MultiIndex::new(idx);
        if value == 0.0 {
            self.entries.remove(&key);
        } else {
            self.entries.insert(key, value);
        }
        Ok(self)
    }

    fn check_tuple(&self, idx: &[usize]) -> Result<()> {
        if idx.len() != self.order {
            return Err(TensorError::ShapeMismatch(format!(
                "index {idx:?} has length {} but order is {}",
                idx.len(),
                self.order
            )));
        }
        if idx.iter().any(|&i| i >= self.dim) {
            return Err(TensorError::IndexOutOfRange {
                index: idx.to_vec(),
                dim: self.dim,
            });
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Value at any ordering of `idx` (0-based).
    pub fn get(&self, idx: &[usize]) -> f64 {
        self.get_canonical(&MultiIndex::new(idx))
    }

    pub fn get_canonical(&self, idx: &MultiIndex) -> f64 {
        self.entries.get(idx).copied().unwrap_or(0.0)
    }

    /// Stored (nonzero) entries in canonical order.
    pub fn entries(&self) -> impl Iterator<Item = (&MultiIndex, f64)> + '_ {
        self.entries.iter().map(|(k, &v)| (k, v))
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    /// Every canonical index with its value, zeros included.
    pub fn all_entries(&self) -> impl Iterator<Item = (MultiIndex, f64)> + '_ {
        canonical_indices(self.order, self.dim).map(move |idx| {
            let v = self.get_canonical(&idx);
            (idx, v)
        })
    }

    pub fn canonical_len(&self) -> usize {
        canonical_count(self.order, self.dim)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn same_shape(&self, other: &Self) -> Result<()> {
        if self.order != other.order || self.dim != other.dim {
            return Err(TensorError::ShapeMismatch(format!(
                "({}, {}) vs ({}, {})",
                self.order, self.dim, other.order, other.dim
            )));
        }
        Ok(())
    }

    /// Smallest entry over all canonical indices (implicit zeros count).
    pub fn min_entry(&self) -> f64 {
        let stored_min = self.entries.values().copied().fold(f64::INFINITY, f64::min);
        if self.entries.len() < self.canonical_len() {
            stored_min.min(0.0)
        } else {
            stored_min
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.values().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// First entry below `-tol`, if any.
    pub fn first_negative(&self, tol: f64) -> Option<(MultiIndex, f64)> {
        self.entries
            .iter()
            .find(|(_, &v)| v < -tol)
            .map(|(k, &v)| (k.clone(), v))
    }

    pub fn is_nonnegative(&self, tol: f64) -> bool {
        self.first_negative(tol).is_none()
    }

    pub fn diagonal_entries(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.get(&vec![i; self.order])).collect()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|(k, v)| k.multiplicity() as f64 * v * v)
            .sum::<f64>()
            .sqrt()
    }

    /// Frobenius distance over the full expansion.
    pub fn frobenius_distance(&self, other: &Self) -> Result<f64> {
        self.same_shape(other)?;
        let mut sum = 0.0;
        for (k, &a) in &self.entries {
            let d = a - other.get_canonical(k);
            sum += k.multiplicity() as f64 * d * d;
        }
        for (k, &b) in &other.entries {
            if !self.entries.contains_key(k) {
                sum += k.multiplicity() as f64 * b * b;
            }
        }
        Ok(sum.sqrt())
    }

    pub fn map_values(&self, mut f: impl FnMut(&MultiIndex, f64) -> f64) -> Self {
        let mut out = Self {
            order: self.order,
            dim: self.dim,
            entries: BTreeMap::new(),
        };
        for idx in canonical_indices(self.order, self.dim) {
            let v = f(&idx, self.get_canonical(&idx));
            if v != 0.0 {
                out.entries.insert(idx, v);
            }
        }
        out
    }

    pub fn scale(&self, c: f64) -> Self {
        let mut out = self.clone();
        out.entries.retain(|_, v| {
            *v *= c;
            *v != 0.0
        });
        out
    }

    /// `self + c * other`.
    pub fn add_scaled(&self, other: &Self, c: f64) -> Result<Self> {
        self.same_shape(other)?;
        let mut out = self.clone();
        for (k, &b) in &other.entries {
            let v = out.get_canonical(k) + c * b;
            if v == 0.0 {
                out.entries.remove(k);
            } else {
                out.entries.insert(k.clone(), v);
            }
        }
        Ok(out)
    }

    /// `A x^{m-1}`: component `i` sums `a_{i i_2 ... i_m} x_{i_2} ... x_{i_m}`.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        for (idx, &a) in &self.entries {
            let ids = idx.indices();
            let mut k = 0;
            while k < ids.len() {
                let i = ids[k];
                let rest = idx.remove_one(i).expect("present");
                let prod: f64 = rest.indices().iter().map(|&j| x[j]).product();
                out[i] += a * rest.multiplicity() as f64 * prod;
                while k < ids.len() && ids[k] == i {
                    k += 1;
                }
            }
        }
        out
    }

    /// `A x^m`.
    pub fn evaluate(&self, x: &[f64]) -> f64 {
        self.entries
            .iter()
            .map(|(idx, &a)| {
                let prod: f64 = idx.indices().iter().map(|&j| x[j]).product();
                a * idx.multiplicity() as f64 * prod
            })
            .sum()
    }

    /// The matrix `A x^{m-2}`.
    pub fn matrix_form(&self, x: &[f64]) -> DMatrix<f64> {
        let n = self.dim;
        let mut out = DMatrix::zeros(n, n);
        for (idx, &a) in &self.entries {
            for i in idx.support() {
                let r1 = idx.remove_one(i).expect("present");
                for j in r1.support() {
                    let r2 = r1.remove_one(j).expect("present");
                    let prod: f64 = r2.indices().iter().map(|&k| x[k]).product();
                    out[(i, j)] += a * r2.multiplicity() as f64 * prod;
                }
            }
        }
        out
    }

    /// Contracts `l` trailing modes with `x`.
    pub fn contract(&self, x: &[f64], l: usize) -> Result<Contraction> {
        if x.len() != self.dim {
            return Err(TensorError::ShapeMismatch(format!(
                "vector length {} vs dimension {}",
                x.len(),
                self.dim
            )));
        }
        if l == 0 || l > self.order {
            return Err(TensorError::InvalidParameter(format!(
                "contraction count {l} outside 1..={}",
                self.order
            )));
        }
        let mut map = self.entries.clone();
        for _ in 0..l {
            map = contract_once(&map, x);
        }
        let remaining = self.order - l;
        Ok(match remaining {
            0 => Contraction::Scalar(map.values().sum()),
            1 => {
                let mut v = vec![0.0; self.dim];
                for (k, val) in map {
                    v[k.indices()[0]] = val;
                }
                Contraction::Vector(v)
            }
            _ => Contraction::Tensor(Self {
                order: remaining,
                dim: self.dim,
                entries: map,
            }),
        })
    }

    /// Multilinear form `A(y_1, ..., y_m)`.
    pub fn multilinear(&self, ys: &[&[f64]]) -> f64 {
        debug_assert_eq!(ys.len(), self.order);
        let mut map = self.entries.clone();
        for y in ys {
            map = contract_once(&map, y);
        }
        map.values().sum()
    }

    /// `P^m A` for a `l x n` matrix `P`: entry `(i_1..i_m)` is
    /// `sum p_{i_1 j_1} ... p_{i_m j_m} a_{j_1 ... j_m}`.
    pub fn transform(&self, p: &DMatrix<f64>) -> Result<Self> {
        if p.ncols() != self.dim {
            return Err(TensorError::ShapeMismatch(format!(
                "matrix has {} columns, tensor dimension is {}",
                p.ncols(),
                self.dim
            )));
        }
        let rows: Vec<Vec<f64>> = (0..p.nrows())
            .map(|i| p.row(i).iter().copied().collect())
            .collect();
        Self::from_fn(self.order, p.nrows(), |idx| {
            let ys: Vec<&[f64]> = idx.iter().map(|&i| rows[i].as_slice()).collect();
            self.multilinear(&ys)
        })
    }

    /// Entry-wise product.
    pub fn hadamard(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let mut out = Self::zeros(self.order, self.dim)?;
        for (k, &a) in &self.entries {
            let v = a * other.get_canonical(k);
            if v != 0.0 {
                out.entries.insert(k.clone(), v);
            }
        }
        Ok(out)
    }

    /// Restriction to the index set `gamma` (0-based), reindexed in
    /// increasing original order.
    pub fn principal_subtensor(&self, gamma: &[usize]) -> Result<Self> {
        if gamma.is_empty() {
            return Err(TensorError::InvalidParameter("empty index set".into()));
        }
        let mut sorted = gamma.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if let Some(&bad) = sorted.iter().find(|&&i| i >= self.dim) {
            return Err(TensorError::IndexOutOfRange {
                index: vec![bad],
                dim: self.dim,
            });
        }
        let mut position = vec![usize::MAX; self.dim];
        for (new, &old) in sorted.iter().enumerate() {
            position[old] = new;
        }
        let mut out = Self::zeros(self.order, sorted.len())?;
        for (k, &v) in &self.entries {
            if k.indices().iter().all(|&i| position[i] != usize::MAX) {
                let mapped: Vec<usize> = k.indices().iter().map(|&i| position[i]).collect();
                out.entries.insert(MultiIndex::from_sorted(mapped), v);
            }
        }
        Ok(out)
    }

    /// Diagonal similarity scaling `a_{i_1..i_m} d_{i_1}^{1-m} d_{i_2} ... d_{i_m}`.
    pub fn diag_scale(&self, d: &[f64]) -> Result<RowTensor> {
        if d.len() != self.dim {
            return Err(TensorError::ShapeMismatch(format!(
                "scaling vector length {} vs dimension {}",
                d.len(),
                self.dim
            )));
        }
        if let Some(bad) = d.iter().find(|&&v| v <= 0.0 || !v.is_finite()) {
            return Err(TensorError::InvalidParameter(format!(
                "scaling entries must be positive, got {bad}"
            )));
        }
        let m = self.order as i32;
        let rows = (0..self.dim)
            .map(|i| {
                RowOperator::row(self, i)
                    .into_iter()
                    .map(|(rest, v)| {
                        let prod: f64 = rest.indices().iter().map(|&j| d[j]).product();
                        (rest, v * d[i].powi(1 - m) * prod)
                    })
                    .collect()
            })
            .collect();
        Ok(RowTensor {
            order: self.order,
            dim: self.dim,
            rows,
        })
    }

    /// Every entry of the full `n^m` expansion, in row-major order.
    pub fn to_dense(&self) -> Vec<f64> {
        let n = self.dim;
        let total = n.pow(self.order as u32);
        let mut out = Vec::with_capacity(total);
        let mut tuple = vec![0usize; self.order];
        for lin in 0..total {
            let mut r = lin;
            for slot in tuple.iter_mut().rev() {
                *slot = r % n;
                r /= n;
            }
            out.push(self.get(&tuple));
        }
        out
    }
}

/// One-vector contraction of a symmetric entry map: `(A y)_J = sum_k A_{J+k} y_k`.
fn contract_once(map: &BTreeMap<MultiIndex, f64>, y: &[f64]) -> BTreeMap<MultiIndex, f64> {
    let mut out: BTreeMap<MultiIndex, f64> = BTreeMap::new();
    for (idx, &a) in map {
        for k in idx.support() {
            if y[k] == 0.0 {
                continue;
            }
            let j = idx.remove_one(k).expect("present");
            *out.entry(j).or_insert(0.0) += a * y[k];
        }
    }
    out.retain(|_, v| *v != 0.0);
    out
}

/// Row view of a (not necessarily symmetric) tensor whose entries are
/// symmetric in all slots after the first.
pub trait RowOperator {
    fn order(&self) -> usize;
    fn dim(&self) -> usize;

    /// Nonzero entries of row `i` as (canonical trailing index, value of a
    /// single full-tuple entry).
    fn row(&self, i: usize) -> Vec<(MultiIndex, f64)>;

    /// `(A x^{m-1})_i` for every row.
    fn apply_rows(&self, x: &[f64]) -> Vec<f64> {
        (0..self.dim())
            .map(|i| {
                self.row(i)
                    .iter()
                    .map(|(rest, v)| {
                        let prod: f64 = rest.indices().iter().map(|&j| x[j]).product();
                        v * rest.multiplicity() as f64 * prod
                    })
                    .sum()
            })
            .collect()
    }
}

impl RowOperator for SymmetricTensor {
    fn order(&self) -> usize {
        self.order
    }

    fn dim(&self) -> usize {
        self.dim
    }

    fn row(&self, i: usize) -> Vec<(MultiIndex, f64)> {
        self.entries
            .iter()
            .filter_map(|(idx, &v)| idx.remove_one(i).map(|rest| (rest, v)))
            .collect()
    }

    fn apply_rows(&self, x: &[f64]) -> Vec<f64> {
        self.apply(x)
    }
}

/// A tensor symmetric only in its trailing `m - 1` slots, stored row by row.
/// Produced by [`SymmetricTensor::diag_scale`] and by row-wise shifts.
#[derive(Debug, Clone, PartialEq)]
pub struct RowTensor {
    order: usize,
    dim: usize,
    rows: Vec<Vec<(MultiIndex, f64)>>,
}

impl RowTensor {
    /// `rows[i]` lists `(canonical trailing index, value)`; absent pairs are 0.
    pub fn from_rows(order: usize, rows: Vec<Vec<(MultiIndex, f64)>>) -> Result<Self> {
        let dim = rows.len();
        for row in &rows {
            if let Some((bad, _)) = row
                .iter()
                .find(|(r, _)| r.order() + 1 != order || r.indices().iter().any(|&j| j >= dim))
            {
                return Err(TensorError::ShapeMismatch(format!(
                    "trailing index {bad} does not fit order {order}, dimension {dim}"
                )));
            }
        }
        Ok(Self { order, dim, rows })
    }

    /// Entry at a full tuple; the first slot selects the row.
    pub fn get(&self, idx: &[usize]) -> f64 {
        let rest = MultiIndex::new(&idx[1..]);
        self.rows[idx[0]]
            .iter()
            .find(|(r, _)| *r == rest)
            .map_or(0.0, |(_, v)| *v)
    }
}

impl RowOperator for RowTensor {
    fn order(&self) -> usize {
        self.order
    }

    fn dim(&self) -> usize {
        self.dim
    }

    fn row(&self, i: usize) -> Vec<(MultiIndex, f64)> {
        self.rows[i].clone()
    }
}
