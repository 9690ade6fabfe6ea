//! All real H-eigenpairs of a dimension-2 tensor.
//!
//! With `x = (1, t)` the eigen-equations reduce to `t^{m-1} f_1(t) = f_2(t)`
//! where `f = A x^{m-1}`; the chart `x = (s, 1)` covers `|t| > 1`. Both
//! charts are searched on `[-1, 1]`, so the axis vectors are included.

use super::{dedup_pairs, EigenPair};
use crate::error::{Result, TensorError};
use crate::poly::Polynomial;
use crate::tensor::RowOperator;

const RESIDUAL_TOL: f64 = 1e-10;

/// Coefficients (ascending) of row `i` of `A x^{m-1}` along `x = e_fixed + t e_free`.
fn row_poly(a: &impl RowOperator, i: usize, free: usize) -> Polynomial {
    let mut c = vec![0.0; a.order()];
    for (rest, v) in a.row(i) {
        c[rest.count(free)] += v * rest.multiplicity() as f64;
    }
    Polynomial::new(c)
}

fn shift_mul(p: &Polynomial, k: usize) -> Vec<f64> {
    let mut c = vec![0.0; k];
    c.extend_from_slice(p.coeffs());
    c
}

fn sub(a: Vec<f64>, b: &[f64]) -> Polynomial {
    let len = a.len().max(b.len());
    Polynomial::new(
        (0..len)
            .map(|k| a.get(k).copied().unwrap_or(0.0) - b.get(k).copied().unwrap_or(0.0))
            .collect(),
    )
}

/// Every real H-eigenpair of a 2-dimensional tensor (symmetric or a row
/// carrier). Each pair satisfies `residual <= 1e-10 * max(1, |A|)`.
///
/// When the characteristic relation vanishes identically, every direction is
/// an eigenvector and the eigenvalue varies continuously; the returned pairs
/// are then the axis directions, the diagonals and the critical points of the
/// eigenvalue along each chart, which include its extremes.
pub fn h_spectrum_dim2(a: &impl RowOperator) -> Result<Vec<EigenPair>> {
    if a.dim() != 2 {
        return Err(TensorError::InvalidShape(format!(
            "exact spectrum needs dimension 2, got {}",
            a.dim()
        )));
    }
    let p = a.order() - 1;
    let scale = (0..2)
        .flat_map(|i| a.row(i).into_iter().map(|(_, v)| v.abs()))
        .fold(0.0f64, f64::max)
        .max(1.0);
    let mut candidates: Vec<(f64, Vec<f64>)> = Vec::new();

    // chart 1: x = (1, t), lambda = f_1(t)
    let f1 = row_poly(a, 0, 1);
    let f2 = row_poly(a, 1, 1);
    let p1 = sub(shift_mul(&f1, p), f2.coeffs());
    // chart 2: x = (s, 1), lambda = g_2(s)
    let g1 = row_poly(a, 0, 0);
    let g2 = row_poly(a, 1, 0);
    let p2 = sub(shift_mul(&g2, p), g1.coeffs());

    let degenerate = p1.is_zero(1e-14 * scale);
    for (chart, poly, lam) in [(0usize, &p1, &f1), (1, &p2, &g2)] {
        let params = if degenerate {
            let mut pts = vec![-1.0, 0.0, 1.0];
            pts.extend(lam.derivative().real_roots(-1.0, 1.0));
            pts
        } else {
            poly.real_roots(-1.0, 1.0)
        };
        for t in params {
            let x = if chart == 0 { vec![1.0, t] } else { vec![t, 1.0] };
            candidates.push((lam.eval(t), x));
        }
    }

    let pairs = candidates
        .into_iter()
        .map(|(lambda, x)| EigenPair::h(a, lambda, &x))
        .filter(|pair| pair.residual <= RESIDUAL_TOL * scale)
        .collect();
    let mut out = dedup_pairs(pairs, 1e-9);
    out.sort_by(|a, b| a.lambda.total_cmp(&b.lambda));
    Ok(out)
}
