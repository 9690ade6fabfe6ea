//! Doubly nonnegative classification: entrywise check, a battery of
//! sufficient conditions, then the H-spectrum.

use super::mclass::{h_tensor_class, m_tensor_class, HClass, MClass};
use super::search::{h_eigen_search, SearchOptions};
use super::{h_spectrum_dim2, EigenPair};
use crate::decomposition::RankOneDecomposition;
use crate::structured::{
    beta_shift, diagonal_dominance_class, hankel_generator, is_b, is_b0, is_double_b,
    is_quasi_double_b0, strong_hankel_test, DominanceClass, Hypergraph,
};
use crate::tensor::SymmetricTensor;
use crate::verdict::{Verdict, Witness};

#[derive(Debug, Clone, PartialEq)]
pub struct DnnOptions {
    /// Zero tolerance for entries and eigenvalues, relative to `max(1, max |a|)`.
    pub tol: f64,
    pub search: SearchOptions,
    /// Decomposition `sum w_k (u_k)^m` for the rank-one-sum certificate.
    pub decomposition: Option<RankOneDecomposition>,
    /// Positive scaling for the generalized diagonal dominance test; a
    /// row-balance heuristic is tried when absent.
    pub scaling: Option<Vec<f64>>,
}

impl Default for DnnOptions {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            search: SearchOptions::default(),
            decomposition: None,
            scaling: None,
        }
    }
}

const GDD_STEPS: usize = 100;
/// Eigenvalues within this relative band of zero are treated as zero.
const EIGEN_TOL: f64 = 1e-10;

pub fn classify_dnn(a: &SymmetricTensor, opts: &DnnOptions) -> Verdict {
    classify(a, opts, false)
}

/// Strongly doubly nonnegative: nonnegative with all H-eigenvalues positive.
pub fn classify_sdnn(a: &SymmetricTensor, opts: &DnnOptions) -> Verdict {
    classify(a, opts, true)
}

fn classify(a: &SymmetricTensor, opts: &DnnOptions, strict: bool) -> Verdict {
    let scale = a.max_abs().max(1.0);
    if let Some((index, value)) = a.first_negative(opts.tol * scale) {
        return Verdict::no(
            vec!["nonnegativity".into()],
            Witness::NegativeEntry { index, value },
        );
    }
    let mut evidence = vec!["nonnegativity".to_string()];
    if let Some(v) = battery(a, opts, strict, &mut evidence) {
        return v;
    }
    let eig_tol = EIGEN_TOL * scale;
    if a.dim() == 1 {
        let lambda = a.get(&vec![0; a.order()]);
        let pair = EigenPair::h(a, lambda, &[1.0]);
        evidence.push("dimension 1".into());
        return decide_min_pair(pair, eig_tol, strict, evidence, true);
    }
    if a.dim() == 2 {
        evidence.push("exact dimension-2 spectrum".into());
        return match h_spectrum_dim2(a) {
            Ok(pairs) if !pairs.is_empty() => {
                let min = pairs.into_iter().next().expect("nonempty");
                decide_min_pair(min, eig_tol, strict, evidence, true)
            }
            _ => Verdict::unknown(evidence),
        };
    }
    evidence.push(format!("H-eigen search ({} restarts)", opts.search.restarts));
    let pairs = h_eigen_search(a, &opts.search);
    match pairs.into_iter().next() {
        Some(min) => decide_min_pair(min, eig_tol, strict, evidence, false),
        None => Verdict::unknown(evidence),
    }
}

/// Decides from the smallest H-eigenvalue; `complete` says whether the
/// spectrum it came from is the full one.
fn decide_min_pair(
    min: EigenPair,
    eig_tol: f64,
    strict: bool,
    evidence: Vec<String>,
    complete: bool,
) -> Verdict {
    if min.lambda < -eig_tol {
        return Verdict::no(evidence, Witness::Eigen(min));
    }
    if !complete {
        return Verdict::unknown(evidence);
    }
    if !strict || min.lambda > eig_tol {
        Verdict::yes(evidence, None)
    } else {
        Verdict::unknown(evidence).note(format!(
            "smallest H-eigenvalue {:e} is within tolerance of zero",
            min.lambda
        ))
    }
}

/// Runs the sufficient conditions in order; the first hit certifies.
fn battery(
    a: &SymmetricTensor,
    opts: &DnnOptions,
    strict: bool,
    evidence: &mut Vec<String>,
) -> Option<Verdict> {
    let mut hit = |name: &str, witness: Option<Witness>| {
        evidence.push(name.to_string());
        Some(Verdict::yes(evidence.clone(), witness))
    };
    // a supplied certificate is checked first so that it is the one reported
    if let Some(d) = &opts.decomposition {
        if let Some(name) = decomposition_certificate(a, d, strict) {
            return hit(name, Some(Witness::Decomposition(d.clone())));
        }
    }
    let target = if strict {
        DominanceClass::Strict
    } else {
        DominanceClass::Weak
    };
    let dd = diagonal_dominance_class(a);
    if dd == DominanceClass::Strict || dd == target {
        return hit("diagonal dominance", None);
    }
    if let Some(d) = opts
        .scaling
        .clone()
        .or_else(|| row_balance_scaling(a, strict))
    {
        if let Ok(scaled) = a.diag_scale(&d) {
            let c = diagonal_dominance_class(&scaled);
            if c == DominanceClass::Strict || c == target {
                return hit("generalized diagonal dominance", None);
            }
        }
    }
    let (hclass, report) = h_tensor_class(a);
    match (hclass, strict) {
        (HClass::StrongH, _) => return hit("strong H-tensor", None),
        (HClass::H, false) if report.is_certain() => return hit("H-tensor", None),
        _ => {}
    }
    if strict {
        if is_b(a) {
            return hit("B-tensor", None);
        }
        if is_double_b(a) {
            return hit("double B-tensor", None);
        }
    } else if is_b0(a) {
        return hit("B0-tensor", None);
    } else if is_quasi_double_b0(a) {
        return hit("quasi-double B0-tensor", None);
    }
    let mb = m_tensor_class(&beta_shift(a));
    match (mb.class, strict) {
        (MClass::StrongM, true) => return hit("MB-tensor", None),
        (MClass::StrongM, false) => return hit("MB0-tensor", None),
        (MClass::M, false) if mb.is_certain() => return hit("MB0-tensor", None),
        _ => {}
    }
    let scale = a.max_abs().max(1.0);
    if !strict {
        if let Some(v) = hankel_generator(a, opts.tol * scale) {
            if strong_hankel_test(&v, a.order(), a.dim()).is_ok_and(|t| t.is_yes()) {
                return hit("strong Hankel", None);
            }
        }
    }
    if !strict && Hypergraph::from_signless_laplacian(a, 1e-12).is_some() {
        return hit("signless Laplacian", None);
    }
    None
}

/// Certificates from an attached `sum w_k (u_k)^m`. Without strictness:
/// a common coordinate positive in every vector with a negative component,
/// or any nonnegative-weight sum at even order. With strictness: nonnegative
/// vectors spanning the whole space.
fn decomposition_certificate(
    a: &SymmetricTensor,
    d: &RankOneDecomposition,
    strict: bool,
) -> Option<&'static str> {
    if d.order() != a.order() || d.dim() != a.dim() || d.is_empty() {
        return None;
    }
    let err = d.reconstruct().frobenius_distance(a).ok()?;
    if err > 1e-9 * a.frobenius_norm().max(1.0) {
        return None;
    }
    let absorbed = d.absorb_weights().ok()?;
    if strict {
        return (absorbed.is_nonnegative(0.0) && absorbed.spans_full_space(1e-8))
            .then_some("nonnegative spanning decomposition");
    }
    if a.order().is_multiple_of(2) {
        return Some("even-order sum of powers");
    }
    let signed: Vec<&[f64]> = absorbed
        .vectors()
        .filter(|u| u.iter().any(|&v| v < 0.0))
        .collect();
    (0..a.dim())
        .any(|i| signed.iter().all(|u| u[i] > 0.0))
        .then_some("rank-one sum with a common positive coordinate")
}

/// Searches for `d > 0` making `A D^{1-m} D..D` diagonally dominant by
/// iterating `d_i^{m-1} <- d_i^{m-1} + r_i(d) / a_{i..i}`, with `r_i` the
/// off-diagonal row mass. Abstains when some diagonal entry vanishes.
fn row_balance_scaling(a: &SymmetricTensor, strict: bool) -> Option<Vec<f64>> {
    let n = a.dim();
    let p = a.order() as i32 - 1;
    let diag = a.diagonal_entries();
    if diag.iter().any(|&v| v <= 0.0) {
        return None;
    }
    let off = a.map_values(|idx, v| if idx.is_diagonal() { 0.0 } else { v.abs() });
    let target = if strict {
        DominanceClass::Strict
    } else {
        DominanceClass::Weak
    };
    let mut d = vec![1.0; n];
    for _ in 0..GDD_STEPS {
        let r = off.apply(&d);
        let mut next: Vec<f64> = (0..n)
            .map(|i| (d[i].powi(p) + r[i] / diag[i]).powf(1.0 / p as f64))
            .collect();
        let top = next.iter().cloned().fold(0.0, f64::max);
        for v in &mut next {
            *v = (*v / top).max(1e-150);
        }
        d = next;
        let c = diagonal_dominance_class(&a.diag_scale(&d).ok()?);
        if c == DominanceClass::Strict || c == target {
            return Some(d);
        }
    }
    None
}
