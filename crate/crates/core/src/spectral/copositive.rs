use super::mclass::{h_tensor_class, HClass};
use crate::error::{Result, TensorError};
use crate::linalg::min_eigenvalue;
use crate::structured::{diagonal_dominance_class, DominanceClass};
use crate::tensor::SymmetricTensor;
use crate::verdict::{Verdict, Witness};

/// Grid mode refuses larger dimensions.
pub const MAX_GRID_DIM: usize = 6;

/// Visits every point of the simplex lattice `{x >= 0, sum x = 1}` with
/// denominator `depth`, starting at the first vertex.
fn for_each_lattice_point(n: usize, depth: usize, mut f: impl FnMut(&[f64])) {
    let mut counts = vec![0usize; n];
    counts[0] = depth;
    let mut x = vec![0.0; n];
    loop {
        for (xi, &c) in x.iter_mut().zip(&counts) {
            *xi = c as f64 / depth as f64;
        }
        f(&x);
        // next composition in reverse-lexicographic order
        let Some(k) = (0..n - 1).rev().find(|&k| counts[k] > 0) else {
            break;
        };
        counts[k] -= 1;
        let tail: usize = counts[k + 1..].iter().sum::<usize>() + 1;
        for c in counts[k + 1..].iter_mut() {
            *c = 0;
        }
        counts[k + 1] = tail;
    }
}

/// Copositivity probe on a simplex lattice.
///
/// A negative form value is a certified counterexample. Certification of
/// copositivity comes only from sufficient conditions: entrywise
/// nonnegativity, diagonal dominance with a nonnegative diagonal, or the
/// H-tensor property. Positive lattice points where the form vanishes must
/// satisfy `A x^{m-1} = 0` with `A x^{m-2}` PSD; a failure there is turned
/// into a counterexample by a short move from the zero.
pub fn copositivity_probe(a: &SymmetricTensor, grid_depth: usize, eps: f64) -> Result<Verdict> {
    let n = a.dim();
    if n > MAX_GRID_DIM {
        return Err(TensorError::InvalidParameter(format!(
            "grid probe supports dimension at most {MAX_GRID_DIM}, got {n}"
        )));
    }
    if grid_depth == 0 {
        return Err(TensorError::InvalidParameter("grid depth must be positive".into()));
    }
    let scale = a.max_abs().max(1.0);
    let mut worst: Option<(Vec<f64>, f64)> = None;
    let mut positive_zeros: Vec<Vec<f64>> = Vec::new();
    let mut min_value = f64::INFINITY;
    for_each_lattice_point(n, grid_depth, |x| {
        let v = a.evaluate(x);
        min_value = min_value.min(v);
        if v < -eps * scale && worst.as_ref().is_none_or(|(_, w)| v < *w) {
            worst = Some((x.to_vec(), v));
        }
        if v.abs() <= eps * scale && x.iter().all(|&t| t > 0.0) {
            positive_zeros.push(x.to_vec());
        }
    });
    if let Some((x, value)) = worst {
        return Ok(Verdict::no(
            vec![format!("simplex lattice depth {grid_depth}: negative value")],
            Witness::Point { x, value },
        ));
    }
    let mut evidence = vec![format!(
        "simplex lattice depth {grid_depth}: minimum {min_value:e}"
    )];
    for x in &positive_zeros {
        match zero_consequences(a, x, eps * scale) {
            ZeroCheck::Pass => {}
            ZeroCheck::Counterexample(y, value) => {
                evidence.push("positive zero violates the copositive consequences".into());
                return Ok(Verdict::no(evidence, Witness::Point { x: y, value }));
            }
            ZeroCheck::Violated => {
                evidence.push(format!(
                    "positive zero at {x:?} violates the copositive consequences; no counterexample located"
                ));
                return Ok(Verdict::unknown(evidence));
            }
        }
    }
    if !positive_zeros.is_empty() {
        evidence.push(format!(
            "{} positive zeros satisfy A x^(m-1) = 0 and A x^(m-2) PSD",
            positive_zeros.len()
        ));
    }
    if a.is_nonnegative(0.0) {
        evidence.push("entrywise nonnegative".into());
        return Ok(Verdict::yes(evidence, None));
    }
    let nonneg_diag = a.diagonal_entries().iter().all(|&d| d >= 0.0);
    if nonneg_diag && diagonal_dominance_class(a) != DominanceClass::None {
        evidence.push("diagonally dominant with nonnegative diagonal".into());
        return Ok(Verdict::yes(evidence, None));
    }
    if nonneg_diag {
        let (class, report) = h_tensor_class(a);
        if class != HClass::NotH && report.is_certain() {
            evidence.push("H-tensor with nonnegative diagonal".into());
            return Ok(Verdict::yes(evidence, None));
        }
    }
    Ok(Verdict::unknown(evidence))
}

enum ZeroCheck {
    Pass,
    Counterexample(Vec<f64>, f64),
    Violated,
}

fn zero_consequences(a: &SymmetricTensor, x: &[f64], tol: f64) -> ZeroCheck {
    let g = a.apply(x);
    let gmax = g.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let hess = a.matrix_form(x);
    let min_eig = min_eigenvalue(&hess);
    if gmax <= tol.sqrt().max(tol) && min_eig >= -tol.sqrt() {
        return ZeroCheck::Pass;
    }
    // Move against the gradient, or along a negative curvature direction.
    let mut directions: Vec<Vec<f64>> = Vec::new();
    if gmax > tol {
        directions.push(g.iter().map(|v| -v).collect());
    }
    if min_eig < 0.0 {
        let eig = nalgebra::SymmetricEigen::new((&hess + hess.transpose()) * 0.5);
        let pos = eig.eigenvalues.imin();
        let d: Vec<f64> = eig.eigenvectors.column(pos).iter().copied().collect();
        directions.push(d.iter().map(|v| -v).collect());
        directions.push(d);
    }
    for d in directions {
        let mut t = 0.5;
        for _ in 0..40 {
            let y: Vec<f64> = x.iter().zip(&d).map(|(xi, di)| xi + t * di).collect();
            if y.iter().all(|&v| v >= 0.0) {
                let value = a.evaluate(&y);
                if value < 0.0 {
                    return ZeroCheck::Counterexample(y, value);
                }
            }
            t *= 0.5;
        }
    }
    ZeroCheck::Violated
}
