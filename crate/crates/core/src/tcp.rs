//! Residual check for the tensor complementarity problem
//! `x >= 0, q + A x^{m-1} >= 0, x^T (q + A x^{m-1}) = 0`.

use crate::error::{Result, TensorError};
use crate::tensor::SymmetricTensor;

#[derive(Debug, Clone, PartialEq)]
pub struct TcpReport {
    pub feasible: bool,
    /// `|x^T (q + A x^{m-1})|`.
    pub gap: f64,
    pub solution: bool,
}

pub fn tcp_residual(a: &SymmetricTensor, q: &[f64], x: &[f64], tol: f64) -> Result<TcpReport> {
    let n = a.dim();
    if q.len() != n || x.len() != n {
        return Err(TensorError::ShapeMismatch(format!(
            "q has length {}, x has length {}, tensor dimension is {n}",
            q.len(),
            x.len()
        )));
    }
    let w: Vec<f64> = a.apply(x).iter().zip(q).map(|(ax, qi)| qi + ax).collect();
    let feasible = x.iter().all(|&v| v >= -tol) && w.iter().all(|&v| v >= -tol);
    let gap = x.iter().zip(&w).map(|(xi, wi)| xi * wi).sum::<f64>().abs();
    Ok(TcpReport {
        feasible,
        gap,
        solution: feasible && gap <= tol,
    })
}
