//! H-eigenvalue machinery and the doubly nonnegative classifier.

mod copositive;
mod dim2;
mod dnn;
mod mclass;
mod radius;
mod search;

pub use copositive::{copositivity_probe, MAX_GRID_DIM};
pub use dim2::h_spectrum_dim2;
pub use dnn::{classify_dnn, classify_sdnn, DnnOptions};
pub use mclass::{comparison_tensor, h_tensor_class, m_tensor_class, HClass, MClass, MReport};
pub use radius::{nqz_spectral_radius, nqz_rows, RadiusEstimate};
pub use search::{h_eigen_search, SearchOptions};

use std::fmt;

use crate::tensor::{RowOperator, SymmetricTensor};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EigenKind {
    H,
    /// H-eigenvector in the nonnegative orthant.
    HPlus,
    /// H-eigenvector in the positive orthant.
    HPlusPlus,
    Z,
}

impl fmt::Display for EigenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EigenKind::H => "H",
            EigenKind::HPlus => "H+",
            EigenKind::HPlusPlus => "H++",
            EigenKind::Z => "Z",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub lambda: f64,
    /// Normalized to `max |x_i| = 1` (H) or `|x|_2 = 1` (Z).
    pub x: Vec<f64>,
    pub kind: EigenKind,
    pub residual: f64,
}

/// `|A x^{m-1} - lambda x^{[m-1]}|_inf`.
pub fn h_residual(a: &impl RowOperator, lambda: f64, x: &[f64]) -> f64 {
    let p = a.order() as i32 - 1;
    a.apply_rows(x)
        .iter()
        .zip(x)
        .map(|(ax, xi)| (ax - lambda * xi.powi(p)).abs())
        .fold(0.0, f64::max)
}

/// `|A x^{m-1} - lambda x|_inf`.
pub fn z_residual(a: &impl RowOperator, lambda: f64, x: &[f64]) -> f64 {
    a.apply_rows(x)
        .iter()
        .zip(x)
        .map(|(ax, xi)| (ax - lambda * xi).abs())
        .fold(0.0, f64::max)
}

impl EigenPair {
    /// H-eigenpair from an unnormalized vector. The vector is scaled to unit
    /// infinity norm with its first largest component positive.
    pub fn h(a: &impl RowOperator, lambda: f64, x: &[f64]) -> Self {
        let x = normalize_inf(x);
        let kind = if x.iter().all(|&v| v > 0.0) {
            EigenKind::HPlusPlus
        } else if x.iter().all(|&v| v >= 0.0) {
            EigenKind::HPlus
        } else {
            EigenKind::H
        };
        let residual = h_residual(a, lambda, &x);
        Self {
            lambda,
            x,
            kind,
            residual,
        }
    }

    /// Z-eigenpair candidate; `x` is scaled to unit 2-norm.
    pub fn z(a: &impl RowOperator, lambda: f64, x: &[f64]) -> Self {
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let x: Vec<f64> = x.iter().map(|v| v / norm).collect();
        let residual = z_residual(a, lambda, &x);
        Self {
            lambda,
            x,
            kind: EigenKind::Z,
            residual,
        }
    }

    /// Recomputes the defining residual against `a`.
    pub fn residual_against(&self, a: &SymmetricTensor) -> f64 {
        match self.kind {
            EigenKind::Z => z_residual(a, self.lambda, &self.x),
            _ => h_residual(a, self.lambda, &self.x),
        }
    }
}

impl fmt::Display for EigenPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}-eigenvalue {:.12} at x = {:?} (residual {:.1e})",
            self.kind, self.lambda, self.x, self.residual
        )
    }
}

pub(crate) fn normalize_inf(x: &[f64]) -> Vec<f64> {
    let peak = x
        .iter()
        .fold(0.0f64, |m, &v| if v.abs() > m.abs() { v } else { m });
    if peak == 0.0 {
        return x.to_vec();
    }
    x.iter().map(|v| v / peak).collect()
}

/// Sign-normalized copy for deduplication: first nonzero component positive.
pub(crate) fn sign_canonical(x: &[f64]) -> Vec<f64> {
    let s = x
        .iter()
        .find(|v| v.abs() > 1e-12)
        .map_or(1.0, |v| v.signum());
    x.iter().map(|v| v * s).collect()
}

/// Drops pairs whose eigenvalue and sign-normalized vector both match an
/// earlier pair within `tol`.
pub(crate) fn dedup_pairs(pairs: Vec<EigenPair>, tol: f64) -> Vec<EigenPair> {
    let mut out: Vec<EigenPair> = Vec::new();
    for p in pairs {
        let key = sign_canonical(&p.x);
        let dup = out.iter().any(|q| {
            (q.lambda - p.lambda).abs() <= tol * q.lambda.abs().max(1.0)
                && sign_canonical(&q.x)
                    .iter()
                    .zip(&key)
                    .all(|(a, b)| (a - b).abs() <= tol)
        });
        if !dup {
            out.push(p);
        }
    }
    out
}
