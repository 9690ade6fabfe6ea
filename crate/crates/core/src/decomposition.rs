//! Weighted sums of symmetric rank-one tensors.

use nalgebra::DMatrix;

use crate::error::{Result, TensorError};
use crate::linalg::numerical_rank;
use crate::tensor::SymmetricTensor;

/// `sum_j alpha_j (u^j)^m`.
#[derive(Debug, Clone, PartialEq)]
pub struct RankOneDecomposition {
    order: usize,
    dim: usize,
    terms: Vec<(f64, Vec<f64>)>,
}

impl RankOneDecomposition {
    pub fn new(order: usize, terms: Vec<(f64, Vec<f64>)>) -> Result<Self> {
        if order < 2 {
            return Err(TensorError::InvalidShape(format!(
                "order must be at least 2, got {order}"
            )));
        }
        let dim = terms
            .first()
            .map(|(_, u)| u.len())
            .ok_or_else(|| TensorError::InvalidParameter("decomposition has no terms".into()))?;
        if dim == 0 {
            return Err(TensorError::InvalidShape("empty vector in decomposition".into()));
        }
        if let Some((_, u)) = terms.iter().find(|(_, u)| u.len() != dim) {
            return Err(TensorError::ShapeMismatch(format!(
                "vector length {} vs {dim}",
                u.len()
            )));
        }
        Ok(Self { order, dim, terms })
    }

    /// Unit weights.
    pub fn from_vectors(order: usize, vectors: Vec<Vec<f64>>) -> Result<Self> {
        Self::new(order, vectors.into_iter().map(|u| (1.0, u)).collect())
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(f64, Vec<f64>)] {
        &self.terms
    }

    pub fn vectors(&self) -> impl Iterator<Item = &[f64]> {
        self.terms.iter().map(|(_, u)| u.as_slice())
    }

    pub fn reconstruct(&self) -> SymmetricTensor {
        SymmetricTensor::from_fn(self.order, self.dim, |idx| {
            self.terms
                .iter()
                .map(|(w, u)| w * idx.iter().map(|&i| u[i]).product::<f64>())
                .sum()
        })
        .expect("shape validated at construction")
    }

    /// Nonnegative weights and vectors, up to `-tol`.
    pub fn is_nonnegative(&self, tol: f64) -> bool {
        self.terms
            .iter()
            .all(|(w, u)| *w >= -tol && u.iter().all(|&v| v >= -tol))
    }

    /// Folds each weight into its vector as `w^{1/m}`. Negative weights are
    /// only representable for odd orders, where the vector flips sign.
    pub fn absorb_weights(&self) -> Result<Self> {
        let m = self.order as f64;
        let terms = self
            .terms
            .iter()
            .map(|(w, u)| {
                let root = if *w >= 0.0 {
                    w.powf(1.0 / m)
                } else if self.order % 2 == 1 {
                    -(-w).powf(1.0 / m)
                } else {
                    return Err(TensorError::InvalidParameter(format!(
                        "negative weight {w} cannot be absorbed at even order"
                    )));
                };
                Ok((1.0, u.iter().map(|v| v * root).collect()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            order: self.order,
            dim: self.dim,
            terms,
        })
    }

    /// Rank of the vector set is `n`, with singular values below
    /// `tol * sigma_max` treated as zero.
    pub fn spans_full_space(&self, tol: f64) -> bool {
        let mat = DMatrix::from_fn(self.dim, self.terms.len(), |i, j| self.terms[j].1[i]);
        numerical_rank(&mat, tol) == self.dim
    }

    /// Maximum entrywise gap between the reconstruction and `target`.
    pub fn max_residual(&self, target: &SymmetricTensor) -> Result<f64> {
        let r = self.reconstruct();
        r.same_shape(target)?;
        Ok(target
            .all_entries()
            .map(|(idx, v)| (v - r.get_canonical(&idx)).abs())
            .fold(0.0, f64::max))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reconstruct_all_ones() {
        let d = RankOneDecomposition::from_vectors(3, vec![vec![1.0, 1.0]]).unwrap();
        assert_eq!(d.reconstruct(), SymmetricTensor::ones(3, 2).unwrap());
    }

    #[test]
    fn absorb_respects_parity() {
        let d = RankOneDecomposition::new(3, vec![(-8.0, vec![1.0, 2.0])]).unwrap();
        let a = d.absorb_weights().unwrap();
        assert!((a.terms()[0].1[1] + 4.0).abs() < 1e-12);
        assert!(a.reconstruct().frobenius_distance(&d.reconstruct()).unwrap() < 1e-10);
        let even = RankOneDecomposition::new(4, vec![(-1.0, vec![1.0])]).unwrap();
        assert!(even.absorb_weights().is_err());
    }

    #[test]
    fn spanning_check() {
        let d = RankOneDecomposition::from_vectors(3, vec![vec![1.0, 0.0], vec![2.0, 0.0]]).unwrap();
        assert!(!d.spans_full_space(1e-10));
        let d = RankOneDecomposition::from_vectors(3, vec![vec![1.0, 0.0], vec![1.0, 1.0]]).unwrap();
        assert!(d.spans_full_space(1e-10));
    }

    #[test]
    fn rejects_ragged_terms() {
        assert!(RankOneDecomposition::from_vectors(3, vec![vec![1.0], vec![1.0, 2.0]]).is_err());
        assert!(RankOneDecomposition::from_vectors(3, vec![]).is_err());
    }
}
