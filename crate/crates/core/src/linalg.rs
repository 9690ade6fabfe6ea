//! Small dense helpers over nalgebra.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

/// Smallest eigenvalue of a symmetric matrix (symmetrized first).
pub fn min_eigenvalue(m: &DMatrix<f64>) -> f64 {
    if m.nrows() == 0 {
        return 0.0;
    }
    let sym = (m + m.transpose()) * 0.5;
    SymmetricEigen::new(sym).eigenvalues.min()
}

/// Positive semidefinite up to `tol` relative to the largest absolute entry.
pub fn is_psd(m: &DMatrix<f64>, tol: f64) -> bool {
    let scale = m.amax().max(1.0);
    min_eigenvalue(m) >= -tol * scale
}

/// Count of singular values above `rel_tol * sigma_max`.
pub fn numerical_rank(m: &DMatrix<f64>, rel_tol: f64) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let sv = m.clone().svd(false, false).singular_values;
    let top = sv.max();
    if top == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * top).count()
}

/// Whether `b` lies in the column space of `m` up to `tol` (relative).
pub fn in_column_space(m: &DMatrix<f64>, b: &DVector<f64>, tol: f64) -> bool {
    let scale = m.amax().max(b.amax()).max(1.0);
    if m.ncols() == 0 || m.amax() == 0.0 {
        return b.amax() <= tol * scale;
    }
    let svd = m.clone().svd(true, true);
    let eps = tol * svd.singular_values.max();
    match svd.solve(b, eps) {
        Ok(x) => (m * x - b).amax() <= tol.sqrt() * scale,
        Err(_) => false,
    }
}

/// Solves `a x = b` by LU, `None` when singular.
pub fn solve(a: DMatrix<f64>, b: &DVector<f64>) -> Option<DVector<f64>> {
    a.lu().solve(b)
}
