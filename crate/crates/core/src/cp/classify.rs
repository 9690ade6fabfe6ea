use super::constructions::{
    cauchy_cp_decomposition, cauchy_generator, decomposition_verify, interleaved_hankel_cp_test,
    quadrature_error, rank_one_cp_check,
};
use super::decomposer::Decomposer;
use super::dominance::{one_duplicated_violation, zero_entry_closure};
use crate::decomposition::RankOneDecomposition;
use crate::error::TensorError;
use crate::structured::hankel_generator;
use crate::tensor::SymmetricTensor;
use crate::verdict::{Verdict, Witness};

pub struct CpOptions<'a> {
    /// Zero threshold for the closure step and the nonnegativity check.
    pub eps: f64,
    pub decomposition: Option<RankOneDecomposition>,
    pub decomposer: Option<&'a dyn Decomposer>,
    /// Node count for Cauchy quadrature certificates.
    pub quadrature_k: usize,
}

impl Default for CpOptions<'_> {
    fn default() -> Self {
        Self {
            eps: 1e-12,
            decomposition: None,
            decomposer: None,
            quadrature_k: 64,
        }
    }
}

/// Relative Frobenius tolerance for accepting a supplied decomposition.
const DECOMPOSITION_TOL: f64 = 1e-6;
const CAUCHY_MATCH: f64 = 1e-9;
const RANK_ONE_TOL: f64 = 1e-10;

/// Complete positivity: nonnegativity, zero-entry closure, one-duplicated
/// dominance, then structural certificates and finally the decomposer hook.
pub fn classify_cp(a: &SymmetricTensor, opts: &CpOptions<'_>) -> Verdict {
    let mut evidence = vec!["nonnegativity".to_string()];
    if let Some((index, value)) = a.first_negative(opts.eps) {
        return Verdict::no(evidence, Witness::NegativeEntry { index, value });
    }
    evidence.push("step 0: zero-entry dominance".into());
    match zero_entry_closure(a, opts.eps) {
        Ok(c) if c.changed => {
            let w = c.witness.expect("a changed closure names an entry");
            return Verdict::no(evidence, w);
        }
        Ok(_) => {}
        Err(TensorError::InvalidShape(msg)) => evidence.push(format!("skipped: {msg}")),
        Err(e) => unreachable!("nonnegativity was checked: {e}"),
    }
    evidence.push("step 1: one-duplicated dominance".into());
    if let Some(w) = one_duplicated_violation(a) {
        return Verdict::no(evidence, w);
    }

    if let Ok(v) = rank_one_cp_check(a, RANK_ONE_TOL) {
        if v.is_yes() {
            evidence.push("rank-one nonnegative".into());
            return Verdict::yes(evidence, v.witness);
        }
    }
    if let Some(c) = cauchy_generator(a, CAUCHY_MATCH).filter(|c| c.iter().all(|&v| v > 0.0)) {
        let k = opts.quadrature_k.max(1);
        if let (Ok(d), Ok(error)) = (
            cauchy_cp_decomposition(&c, a.order(), k),
            quadrature_error(&c, a.order(), k),
        ) {
            evidence.push("positive Cauchy".into());
            return Verdict::yes(
                evidence,
                Some(Witness::Quadrature {
                    decomposition: d,
                    k,
                    error,
                }),
            );
        }
    }
    let scale = a.max_abs().max(1.0);
    if let Some(v) = hankel_generator(a, opts.eps * scale) {
        if interleaved_hankel_cp_test(&v, a.order(), a.dim()).is_ok_and(|t| t.is_yes()) {
            evidence.push("interleaved strong Hankel".into());
            return Verdict::yes(evidence, None);
        }
    }
    let tol = DECOMPOSITION_TOL * a.frobenius_norm().max(1.0);
    if let Some(d) = &opts.decomposition {
        if decomposition_verify(a, d, tol).is_ok_and(|c| c.is_cp_certificate()) {
            evidence.push("supplied decomposition".into());
            return Verdict::yes(evidence, Some(Witness::Decomposition(d.clone())));
        }
        evidence.push("supplied decomposition rejected".into());
    }
    if let Some(hook) = opts.decomposer {
        evidence.push(hook.name());
        match hook.decompose(a) {
            Ok(Some(d)) if decomposition_verify(a, &d, tol).is_ok_and(|c| c.is_cp_certificate()) => {
                return Verdict::yes(evidence, Some(Witness::Decomposition(d)));
            }
            Ok(Some(_)) => evidence.push("proposed decomposition failed verification".into()),
            Ok(None) => evidence.push("no decomposition found".into()),
            Err(e) => evidence.push(format!("decomposer failed: {e}")),
        }
    }
    Verdict::unknown(evidence)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cp::constructions::gap_family;
    use crate::cp::decomposer::GreedyDecomposer;
    use crate::structured::{cauchy_from_vector, hilbert_tensor, Hypergraph};

    #[test]
    fn positive_cauchy_certified() {
        let a = cauchy_from_vector(&[0.5, 1.7, 2.2], 3).unwrap();
        let v = classify_cp(&a, &CpOptions::default());
        assert!(v.is_yes(), "{v}");
        assert!(matches!(v.witness, Some(Witness::Quadrature { k: 64, .. })));
        assert_eq!(v.witness.as_ref().unwrap().check(&a, 1e-12), Some(true));
    }

    #[test]
    fn laplacian_excluded_at_step_0() {
        let q = Hypergraph::new(5, 3, vec![vec![0, 1, 4], vec![2, 3, 4]])
            .unwrap()
            .signless_laplacian();
        let v = classify_cp(&q, &CpOptions::default());
        assert!(v.is_no());
        assert!(matches!(v.witness, Some(Witness::ZeroDominance { .. })));
    }

    #[test]
    fn gap_excluded_at_step_0() {
        let (a, _) = gap_family(1, 0, 2.0, 4, 3).unwrap();
        let v = classify_cp(&a, &CpOptions::default());
        assert!(matches!(v.witness, Some(Witness::ZeroDominance { .. })), "{v}");
    }

    #[test]
    fn hilbert_via_cauchy() {
        let v = classify_cp(&hilbert_tensor(4, 3).unwrap(), &CpOptions::default());
        assert!(v.is_yes());
        assert_eq!(v.evidence.last().unwrap(), "positive Cauchy");
    }

    #[test]
    fn supplied_and_hooked_decompositions() {
        let d = RankOneDecomposition::from_vectors(
            3,
            vec![vec![1.0, 0.2, 0.3], vec![0.1, 1.0, 0.4], vec![0.3, 0.2, 1.0]],
        )
        .unwrap();
        let a = d.reconstruct();
        assert!(classify_cp(&a, &CpOptions::default()).is_unknown());
        let with = CpOptions {
            decomposition: Some(d),
            ..Default::default()
        };
        assert!(classify_cp(&a, &with).is_yes());
        let greedy = GreedyDecomposer {
            max_terms: 1,
            ..Default::default()
        };
        let hooked = CpOptions {
            decomposer: Some(&greedy),
            ..Default::default()
        };
        // one greedy term cannot fit three generic ones
        assert!(classify_cp(&a, &hooked).is_unknown());
    }
}
