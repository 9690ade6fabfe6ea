use crate::error::{Result, TensorError};
use crate::tensor::{RowOperator, SymmetricTensor};

/// Spectral radius estimate of a nonnegative tensor with a certified bracket.
#[derive(Debug, Clone, PartialEq)]
pub struct RadiusEstimate {
    pub rho: f64,
    /// Collatz-Wielandt lower and upper bounds; `lo <= rho(B) <= hi`.
    pub lo: f64,
    pub hi: f64,
    pub converged: bool,
    pub iterations: usize,
    /// Perturbation `delta` added along all-ones once the bracket stalled, or 0.
    pub perturbation: f64,
    /// Bracket after every iteration, for monotonicity checks.
    pub history: Vec<(f64, f64)>,
    pub evidence: Vec<String>,
}

const STALL_WINDOW: usize = 50;

/// NQZ power iteration on a nonnegative symmetric tensor.
///
/// Iterates `x <- (B' x^{m-1})^{[1/(m-1)]}` with `B' = B + sigma I`, where the
/// shift `sigma` (the largest entry) makes the iteration primitive on weakly
/// irreducible inputs without moving the ratio bracket. If the bracket makes
/// no progress for 50 iterations, `B + delta E` replaces `B` with `delta =
/// 1e-10 * max entry`; for symmetric `B` this moves the radius by at most
/// `delta n^{m-1}`, which is charged to the lower bound.
pub fn nqz_spectral_radius(b: &SymmetricTensor, tol: f64, max_iter: usize) -> Result<RadiusEstimate> {
    if let Some((idx, value)) = b.first_negative(0.0) {
        return Err(TensorError::NegativeEntry {
            index: idx.to_one_based(),
            value,
        });
    }
    Ok(run(b, true, tol, max_iter))
}

/// NQZ on a nonnegative row operator that need not be symmetric. Only
/// the unperturbed Collatz-Wielandt ratios count toward the bracket.
pub fn nqz_rows(b: &impl RowOperator, tol: f64, max_iter: usize) -> Result<RadiusEstimate> {
    for i in 0..b.dim() {
        if let Some((rest, v)) = b.row(i).into_iter().find(|(_, v)| *v < 0.0) {
            let mut idx = vec![i + 1];
            idx.extend(rest.to_one_based());
            return Err(TensorError::NegativeEntry { index: idx, value: v });
        }
    }
    Ok(run(b, false, tol, max_iter))
}

/// `(min, max)` of `(B x^{m-1})_i / x_i^{m-1}`; uninformative when some
/// `x_i^{m-1}` underflows.
fn ratios(bx: &[f64], x: &[f64], p: i32) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for (v, xi) in bx.iter().zip(x) {
        let r = v / xi.powi(p);
        if !r.is_finite() {
            return (f64::NEG_INFINITY, f64::INFINITY);
        }
        lo = lo.min(r);
        hi = hi.max(r);
    }
    (lo, hi)
}

fn run(b: &impl RowOperator, symmetric: bool, tol: f64, max_iter: usize) -> RadiusEstimate {
    let n = b.dim();
    let p = b.order() as i32 - 1;
    let scale = (0..n)
        .flat_map(|i| b.row(i).into_iter().map(|(_, v)| v))
        .fold(0.0f64, f64::max);
    let mut evidence = Vec::new();
    if scale == 0.0 {
        return RadiusEstimate {
            rho: 0.0,
            lo: 0.0,
            hi: 0.0,
            converged: true,
            iterations: 0,
            perturbation: 0.0,
            history: vec![(0.0, 0.0)],
            evidence: vec!["zero tensor".into()],
        };
    }
    let sigma = scale;
    let ones_power = (n as f64).powi(p);
    let mut delta = 0.0;
    let mut x = vec![1.0; n];
    let mut lo = 0.0f64;
    let mut hi = f64::INFINITY;
    let mut history = Vec::new();
    let mut best_width = f64::INFINITY;
    let mut since_progress = 0;
    let mut iterations = 0;
    let mut converged = false;

    for it in 0..max_iter {
        iterations = it + 1;
        let bx = b.apply_rows(&x);
        let (r_lo, r_hi) = ratios(&bx, &x, p);
        hi = hi.min(r_hi);
        lo = lo.max(r_lo);
        let sum: f64 = x.iter().sum();
        let ex = sum.powi(p);
        if delta > 0.0 {
            // Ratios of B + delta E bound its radius, which dominates rho(B)
            // and, by symmetry, exceeds it by at most delta n^{m-1}.
            let (p_lo, p_hi) = ratios(
                &bx.iter().map(|v| v + delta * ex).collect::<Vec<_>>(),
                &x,
                p,
            );
            hi = hi.min(p_hi);
            if symmetric {
                lo = lo.max(p_lo - delta * ones_power);
            }
        }
        history.push((lo, hi));
        let width = hi - lo;
        if width <= tol * hi.abs().max(1.0) {
            converged = true;
            break;
        }
        if width < best_width * (1.0 - 1e-12) {
            best_width = width;
            since_progress = 0;
        } else {
            since_progress += 1;
        }
        if since_progress >= STALL_WINDOW && delta == 0.0 {
            delta = 1e-10 * scale;
            since_progress = 0;
            evidence.push(format!("bracket stalled; perturbation delta = {delta:e}"));
        }
        // shifted step on B + sigma I (+ delta E)
        let mut y: Vec<f64> = bx
            .iter()
            .zip(&x)
            .map(|(v, xi)| v + sigma * xi.powi(p) + delta * ex)
            .collect();
        for v in &mut y {
            *v = v.max(0.0).powf(1.0 / p as f64);
        }
        let norm = y.iter().cloned().fold(0.0, f64::max);
        if norm == 0.0 || !norm.is_finite() {
            break;
        }
        let floor = if delta > 0.0 { 0.0 } else { 1e-300 };
        x = y.iter().map(|v| (v / norm).max(floor)).collect();
    }
    if !converged {
        evidence.push(format!(
            "no convergence after {iterations} iterations; bracket [{lo:e}, {hi:e}]"
        ));
    }
    RadiusEstimate {
        rho: 0.5 * (lo + hi),
        lo,
        hi,
        converged,
        iterations,
        perturbation: delta,
        history,
        evidence,
    }
}
