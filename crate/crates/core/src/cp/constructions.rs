//! Complete positivity certificates from structure: rank-one tensors,
//! Cauchy tensors, interleaved Hankel vectors and supplied decompositions.

use crate::decomposition::RankOneDecomposition;
use crate::error::{Result, TensorError};
use crate::structured::{cauchy_from_vector, hankel_len, strong_hankel_test};
use crate::tensor::SymmetricTensor;
use crate::verdict::{Verdict, Witness};

/// Decides complete positivity of a tensor asserted to be `lambda x^m`.
///
/// `(lambda, x)` is recovered from the largest diagonal entry and the
/// entries next to it; the reconstruction must match `a` within
/// `tol * max(1, |a|_F)`, otherwise `NotRankOne` is returned.
pub fn rank_one_cp_check(a: &SymmetricTensor, tol: f64) -> Result<Verdict> {
    let m = a.order();
    let n = a.dim();
    let bound = tol * a.frobenius_norm().max(1.0);
    let diag = a.diagonal_entries();
    let k = (0..n)
        .max_by(|&i, &j| diag[i].abs().total_cmp(&diag[j].abs()))
        .expect("dimension is positive");
    let evidence = vec!["rank-one".to_string()];
    if diag[k] == 0.0 {
        // a rank-one tensor with zero diagonal vanishes
        if a.frobenius_norm() > bound {
            return Err(TensorError::NotRankOne(a.frobenius_norm()));
        }
        let d = RankOneDecomposition::new(m, vec![(1.0, vec![0.0; n])])?;
        return Ok(Verdict::yes(evidence, Some(Witness::Decomposition(d))));
    }
    let lambda = diag[k];
    let x: Vec<f64> = (0..n)
        .map(|j| {
            let mut idx = vec![k; m];
            idx[m - 1] = j;
            a.get(&idx) / lambda
        })
        .collect();
    let fit = RankOneDecomposition::new(m, vec![(lambda, x.clone())])?;
    let err = fit.reconstruct().frobenius_distance(a)?;
    if err > bound {
        return Err(TensorError::NotRankOne(err));
    }
    if let Some((index, value)) = a.first_negative(bound) {
        return Ok(Verdict::no(evidence, Witness::NegativeEntry { index, value }));
    }
    // nonnegative: lambda x^m = (|lambda|^{1/m} |x|)^m with x_k = 1
    let root = lambda.abs().powf(1.0 / m as f64);
    let u: Vec<f64> = x.iter().map(|v| root * v.abs()).collect();
    let d = RankOneDecomposition::from_vectors(m, vec![u])?;
    Ok(Verdict::yes(evidence, Some(Witness::Decomposition(d))))
}

/// The `k`-node right-endpoint quadrature of
/// `int_0^1 (sum_i t^{c_i - 1/m} x_i)^m dt`:
/// `u^j_i = (j/k)^{c_i - 1/m} / k^{1/m}` for `j = 1..k`.
pub fn cauchy_cp_decomposition(c: &[f64], order: usize, k: usize) -> Result<RankOneDecomposition> {
    if let Some(&bad) = c.iter().find(|&&v| !(v > 0.0)) {
        return Err(TensorError::InvalidParameter(format!(
            "Cauchy quadrature needs positive generators, got {bad}"
        )));
    }
    if k == 0 {
        return Err(TensorError::InvalidParameter("quadrature needs at least one node".into()));
    }
    let m = order as f64;
    let scale = (k as f64).powf(-1.0 / m);
    let vectors = (1..=k)
        .map(|j| {
            let t = j as f64 / k as f64;
            c.iter().map(|&ci| t.powf(ci - 1.0 / m) * scale).collect()
        })
        .collect();
    RankOneDecomposition::from_vectors(order, vectors)
}

/// Frobenius distance between the Cauchy tensor and its `k`-node quadrature.
pub fn quadrature_error(c: &[f64], order: usize, k: usize) -> Result<f64> {
    let exact = cauchy_from_vector(c, order)?;
    cauchy_cp_decomposition(c, order, k)?
        .reconstruct()
        .frobenius_distance(&exact)
}

/// Recovers `c` with `c_i = 1/(m a_{i..i})` and accepts when every entry is
/// `1/(c_{i_1} + .. + c_{i_m})` within `rel_tol`.
pub fn cauchy_generator(a: &SymmetricTensor, rel_tol: f64) -> Option<Vec<f64>> {
    let m = a.order() as f64;
    let c: Vec<f64> = a
        .diagonal_entries()
        .iter()
        .map(|&d| (d != 0.0).then(|| 1.0 / (m * d)))
        .collect::<Option<_>>()?;
    a.all_entries()
        .all(|(idx, v)| {
            let s: f64 = idx.indices().iter().map(|&i| c[i]).sum();
            s != 0.0 && (v - 1.0 / s).abs() <= rel_tol * v.abs()
        })
        .then_some(c)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecompositionCheck {
    pub reconstructs: bool,
    pub nonneg: bool,
    pub spans: bool,
}

impl DecompositionCheck {
    pub fn is_cp_certificate(&self) -> bool {
        self.reconstructs && self.nonneg
    }

    pub fn is_scp_certificate(&self) -> bool {
        self.is_cp_certificate() && self.spans
    }
}

/// Checks a decomposition against `a`: Frobenius distance at most `tol`,
/// weights and vectors at least `-tol`, and full numerical rank with
/// singular values below `tol * sigma_max` dropped.
pub fn decomposition_verify(
    a: &SymmetricTensor,
    d: &RankOneDecomposition,
    tol: f64,
) -> Result<DecompositionCheck> {
    decomposition_verify_with(a, d, tol, tol)
}

/// As [`decomposition_verify`] with a separate rank cutoff.
pub fn decomposition_verify_with(
    a: &SymmetricTensor,
    d: &RankOneDecomposition,
    tol: f64,
    rank_tol: f64,
) -> Result<DecompositionCheck> {
    if d.order() != a.order() || d.dim() != a.dim() {
        return Err(TensorError::ShapeMismatch(format!(
            "decomposition of order {} dim {} vs tensor of order {} dim {}",
            d.order(),
            d.dim(),
            a.order(),
            a.dim()
        )));
    }
    let nonneg = d.terms().iter().all(|(w, _)| *w >= 0.0) && d.is_nonnegative(tol);
    Ok(DecompositionCheck {
        reconstructs: d.reconstruct().frobenius_distance(a)? <= tol,
        nonneg,
        spans: d.spans_full_space(rank_tol),
    })
}

/// `(h_0, 0, h_1, 0, .., 0, h_N)`.
pub fn interleave(v: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(2 * v.len().saturating_sub(1) + 1);
    for (k, &h) in v.iter().enumerate() {
        if k > 0 {
            out.push(0.0);
        }
        out.push(h);
    }
    out
}

/// Sufficient test for complete positivity of a nonnegative Hankel tensor:
/// the order-`m`, dimension-`2n-1` Hankel tensor of the interleaved vector
/// must be strong Hankel. Failure of that test leaves the answer open.
pub fn interleaved_hankel_cp_test(v: &[f64], order: usize, dim: usize) -> Result<Verdict> {
    let want = hankel_len(order, dim);
    if v.len() != want {
        return Err(TensorError::InvalidParameter(format!(
            "Hankel generating vector needs length {want}, got {}",
            v.len()
        )));
    }
    if let Some((k, &value)) = v.iter().enumerate().find(|(_, &x)| x < 0.0) {
        return Err(TensorError::InvalidParameter(format!(
            "Hankel tensor is not nonnegative: v_{k} = {value}"
        )));
    }
    let inner = strong_hankel_test(&interleave(v), order, 2 * dim - 1)?;
    let evidence = vec!["interleaved strong Hankel".to_string()];
    Ok(if inner.is_yes() {
        Verdict::yes(evidence, None)
    } else {
        Verdict::unknown(evidence).note(format!("interleaved test: {}", inner.status))
    })
}

/// `alpha (e_i - e_j)^m + alpha e^m` with 0-based `i != j`: doubly
/// nonnegative but not completely positive.
pub fn gap_family(
    i: usize,
    j: usize,
    alpha: f64,
    order: usize,
    dim: usize,
) -> Result<(SymmetricTensor, RankOneDecomposition)> {
    if order < 3 || dim < 2 {
        return Err(TensorError::InvalidParameter(format!(
            "gap family needs order >= 3 and dimension >= 2, got {order} and {dim}"
        )));
    }
    if i == j || i >= dim || j >= dim {
        return Err(TensorError::InvalidParameter(format!(
            "gap family needs distinct coordinates below {dim}, got {i} and {j}"
        )));
    }
    if !(alpha > 0.0) {
        return Err(TensorError::InvalidParameter(format!("alpha must be positive, got {alpha}")));
    }
    let mut u = vec![0.0; dim];
    u[i] = 1.0;
    u[j] = -1.0;
    let d = RankOneDecomposition::new(order, vec![(alpha, u), (alpha, vec![1.0; dim])])?;
    Ok((d.reconstruct(), d))
}
