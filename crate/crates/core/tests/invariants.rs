use cpt_core::cp::{classify_cp, decomposition_verify, CpOptions};
use cpt_core::experiment::{
    run_experiment, sample_hankel, Exclusion, ExperimentConfig, ExperimentKind,
};
use cpt_core::spectral::{
    classify_dnn, h_eigen_search, h_spectrum_dim2, nqz_spectral_radius, DnnOptions,
    SearchOptions,
};
use cpt_core::structured::{
    cauchy_from_vector, diagonal_dominance_class, hankel_from_vector, hankel_len,
    hilbert_tensor, DominanceClass, Hypergraph,
};
use cpt_core::tensor::Contraction;
use cpt_core::{RankOneDecomposition, SymmetricTensor};
use nalgebra::DMatrix;
use proptest::prelude::*;

fn arb_decomposition(
    orders: std::ops::RangeInclusive<usize>,
    dims: std::ops::RangeInclusive<usize>,
    signed: bool,
) -> impl Strategy<Value = RankOneDecomposition> {
    // nonnegative values are exact zeros or well above the absolute zero
    // threshold, so products of small entries cannot straddle it
    let value = move || {
        if signed {
            (-1.0f64..1.0).boxed()
        } else {
            prop_oneof![Just(0.0), 0.05f64..1.0].boxed()
        }
    };
    (orders, dims, 1usize..=4).prop_flat_map(move |(m, n, k)| {
        let weight = if signed { (-1.0f64..2.0).boxed() } else { (0.05f64..2.0).boxed() };
        prop::collection::vec((weight, prop::collection::vec(value(), n)), k)
            .prop_map(move |terms| RankOneDecomposition::new(m, terms).unwrap())
    })
}

fn close(a: &SymmetricTensor, b: &SymmetricTensor, rel: f64) -> bool {
    a.frobenius_distance(b).unwrap() <= rel * a.frobenius_norm().max(1.0)
}

fn residual(a: &SymmetricTensor, lambda: f64, x: &[f64]) -> f64 {
    let p = a.order() as i32 - 1;
    a.apply(x)
        .iter()
        .zip(x)
        .map(|(ax, xi)| (ax - lambda * xi.powi(p)).abs())
        .fold(0.0, f64::max)
}

fn positive_cauchy(c: &[f64], m: usize) -> SymmetricTensor {
    cauchy_from_vector(c, m).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn evaluation_matches_decomposition(
        d in arb_decomposition(2..=4, 1..=4, true),
        xs in prop::collection::vec(prop::collection::vec(-1.0f64..1.0, 4), 100),
    ) {
        let a = d.reconstruct();
        for x in &xs {
            let x = &x[..d.dim()];
            let direct: f64 = d
                .terms()
                .iter()
                .map(|(w, u)| w * u.iter().zip(x).map(|(p, q)| p * q).sum::<f64>().powi(d.order() as i32))
                .sum();
            prop_assert!((a.evaluate(x) - direct).abs() <= 1e-10 * direct.abs().max(1.0));
        }
    }

    #[test]
    fn hadamard_and_subtensor_commute_with_reconstruction(
        d in arb_decomposition(3..=3, 1..=3, true),
        e in arb_decomposition(3..=3, 3..=3, true),
        keep in prop::collection::vec(any::<bool>(), 3),
    ) {
        let n = d.dim();
        let e = RankOneDecomposition::new(
            3,
            e.terms().iter().map(|(w, u)| (*w, u[..n].to_vec())).collect(),
        ).unwrap();
        let product = RankOneDecomposition::new(
            3,
            d.terms()
                .iter()
                .flat_map(|(w, u)| {
                    e.terms().iter().map(move |(v, z)| {
                        (w * v, u.iter().zip(z).map(|(p, q)| p * q).collect())
                    })
                })
                .collect(),
        ).unwrap();
        let h = d.reconstruct().hadamard(&e.reconstruct()).unwrap();
        prop_assert!(close(&h, &product.reconstruct(), 1e-12));

        let gamma: Vec<usize> = (0..n).filter(|&i| keep[i]).collect();
        prop_assume!(!gamma.is_empty());
        let sub = RankOneDecomposition::new(
            3,
            d.terms().iter().map(|(w, u)| (*w, gamma.iter().map(|&i| u[i]).collect())).collect(),
        ).unwrap();
        let p = d.reconstruct().principal_subtensor(&gamma).unwrap();
        prop_assert!(close(&p, &sub.reconstruct(), 1e-12));
    }

    #[test]
    fn permutation_transform_keeps_entries_and_spectrum(
        d in arb_decomposition(3..=4, 2..=2, false),
        swap in any::<bool>(),
    ) {
        let a = d.reconstruct();
        let perm = if swap { [1, 0] } else { [0, 1] };
        let p = DMatrix::from_fn(2, 2, |i, j| if perm[i] == j { 1.0 } else { 0.0 });
        let b = a.transform(&p).unwrap();
        let sorted = |t: &SymmetricTensor| {
            let mut v = t.to_dense();
            v.sort_by(f64::total_cmp);
            v
        };
        let (sa, sb) = (sorted(&a), sorted(&b));
        for (x, y) in sa.iter().zip(&sb) {
            prop_assert!((x - y).abs() <= 1e-12 * x.abs().max(1.0));
        }
        let spectrum = |t: &SymmetricTensor| {
            let mut l: Vec<f64> = h_spectrum_dim2(t).unwrap().iter().map(|p| p.lambda).collect();
            l.sort_by(f64::total_cmp);
            l
        };
        let (la, lb) = (spectrum(&a), spectrum(&b));
        prop_assert_eq!(la.len(), lb.len());
        for (x, y) in la.iter().zip(&lb) {
            prop_assert!((x - y).abs() <= 1e-8 * x.abs().max(1.0));
        }
    }

    #[test]
    fn diagonal_scaling_keeps_dim2_spectrum(
        d in arb_decomposition(3..=4, 2..=2, false),
        s in 0.2f64..5.0,
    ) {
        let a = d.reconstruct();
        let scaled = a.diag_scale(&[1.0, s]).unwrap();
        let spectrum = |pairs: Vec<cpt_core::spectral::EigenPair>| {
            let mut l: Vec<f64> = pairs.iter().map(|p| p.lambda).collect();
            l.sort_by(f64::total_cmp);
            l.dedup_by(|x, y| (*x - *y).abs() < 1e-9);
            l
        };
        let la = spectrum(h_spectrum_dim2(&a).unwrap());
        let lb = spectrum(h_spectrum_dim2(&scaled).unwrap());
        prop_assert_eq!(la.len(), lb.len());
        for (x, y) in la.iter().zip(&lb) {
            prop_assert!((x - y).abs() <= 1e-9 * x.abs().max(1.0));
        }
    }

    #[test]
    fn hankel_entries_depend_on_index_sum(
        (m, n, v) in (2usize..=4, 1usize..=4).prop_flat_map(|(m, n)| {
            (Just(m), Just(n), prop::collection::vec(-1.0f64..1.0, hankel_len(m, n)))
        }),
        picks in prop::collection::vec(prop::collection::vec(0usize..4, 4), 20),
    ) {
        let h = hankel_from_vector(&v, m, n).unwrap();
        for idx in &picks {
            let idx: Vec<usize> = idx[..m].iter().map(|&i| i % n).collect();
            prop_assert_eq!(h.get(&idx), v[idx.iter().sum::<usize>()]);
        }
    }

    #[test]
    fn laplacian_is_nonnegative_and_dominant(
        n in 3usize..=7,
        raw in prop::collection::vec(prop::collection::btree_set(0usize..7, 3), 1..6),
    ) {
        let edges: Vec<Vec<usize>> = raw
            .into_iter()
            .map(|e| e.into_iter().collect::<Vec<_>>())
            .filter(|e| e.iter().all(|&v| v < n))
            .collect();
        prop_assume!(!edges.is_empty());
        let Ok(g) = Hypergraph::new(n, 3, edges) else { return Ok(()) };
        let q = g.signless_laplacian();
        prop_assert!(q.is_nonnegative(0.0));
        prop_assert_ne!(diagonal_dominance_class(&q), DominanceClass::None);
    }

    #[test]
    fn cauchy_dim2_subtensors_are_positive_definite(
        c in prop::collection::vec(0.1f64..3.0, 2..=4),
        m in 3usize..=4,
    ) {
        let a = positive_cauchy(&c, m);
        prop_assert!(a.is_nonnegative(0.0) && a.min_entry() > 0.0);
        for i in 0..c.len() {
            for j in i + 1..c.len() {
                prop_assume!((c[i] - c[j]).abs() > 1e-3);
                let sub = a.principal_subtensor(&[i, j]).unwrap();
                let min = h_spectrum_dim2(&sub)
                    .unwrap()
                    .iter()
                    .map(|p| p.lambda)
                    .fold(f64::INFINITY, f64::min);
                prop_assert!(min > 0.0, "min {min} for {c:?}");
            }
        }
    }

    #[test]
    fn cp_certificates_verify_and_propagate(
        d in arb_decomposition(3..=4, 2..=3, false),
        e in arb_decomposition(3..=4, 3..=3, false),
        x in prop::collection::vec(0.0f64..1.0, 3),
    ) {
        let a = d.reconstruct();
        prop_assume!(a.frobenius_norm() > 1e-6);
        let tol = |t: &SymmetricTensor| 1e-6 * t.frobenius_norm().max(1.0);
        let opts = CpOptions { decomposition: Some(d.clone()), ..Default::default() };
        let v = classify_cp(&a, &opts);
        prop_assert!(!v.is_no(), "{v}");
        if v.is_yes() {
            if let Some(dec) = v.decomposition() {
                let w = v.witness.as_ref().unwrap();
                prop_assert_eq!(w.check(&a, 1e-9), Some(true));
                let check = decomposition_verify(&a, dec, tol(&a).max(1e-3)).unwrap();
                prop_assert!(check.nonneg);
            }
            // principal dim-2 subtensors keep nonnegative H-eigenvalues
            for i in 0..a.dim() {
                for j in i + 1..a.dim() {
                    let sub = a.principal_subtensor(&[i, j]).unwrap();
                    prop_assert!(!classify_dnn(&sub, &DnnOptions::default()).is_no());
                }
            }
        }

        // products of nonnegative decompositions certify the Hadamard product
        let n = d.dim();
        let e = RankOneDecomposition::new(
            d.order(),
            e.terms().iter().map(|(w, u)| (*w, u[..n].to_vec())).collect(),
        ).unwrap();
        let product = RankOneDecomposition::new(
            d.order(),
            d.terms()
                .iter()
                .flat_map(|(w, u)| e.terms().iter().map(move |(v, z)| {
                    (w * v, u.iter().zip(z).map(|(p, q)| p * q).collect())
                }))
                .collect(),
        ).unwrap();
        let h = a.hadamard(&e.reconstruct()).unwrap();
        let hv = classify_cp(&h, &CpOptions { decomposition: Some(product), ..Default::default() });
        prop_assert!(!hv.is_no(), "{hv}");
        prop_assert!(hv.is_yes() || h.frobenius_norm() < 1e-9, "{hv}");

        // contraction by a nonnegative vector keeps a nonnegative decomposition
        let x = &x[..n];
        if let Contraction::Tensor(t) = a.contract(x, d.order() - 2).unwrap() {
            let induced = RankOneDecomposition::new(
                2,
                d.terms()
                    .iter()
                    .map(|(w, u)| {
                        let dot: f64 = u.iter().zip(x).map(|(p, q)| p * q).sum();
                        (w * dot.powi(d.order() as i32 - 2), u.clone())
                    })
                    .collect(),
            ).unwrap();
            let check = decomposition_verify(&t, &induced, 1e-10 * t.frobenius_norm().max(1.0)).unwrap();
            prop_assert!(check.reconstructs && check.nonneg);
        }
    }
}

#[test]
fn identity_radius_is_one() {
    for (m, n) in [(3, 2), (4, 3), (5, 4)] {
        let r = nqz_spectral_radius(&SymmetricTensor::identity(m, n).unwrap(), 1e-13, 1000).unwrap();
        assert!((r.rho - 1.0).abs() <= 1e-12, "{r:?}");
    }
}

#[test]
fn eigenpairs_reverify_independently() {
    let tensors = [
        hilbert_tensor(3, 3).unwrap(),
        positive_cauchy(&[0.3, 1.1, 2.0], 4),
        RankOneDecomposition::from_vectors(3, vec![vec![1.0, -1.0, 0.5], vec![0.2, 1.0, 1.0]])
            .unwrap()
            .reconstruct(),
    ];
    for a in &tensors {
        let pairs = h_eigen_search(a, &SearchOptions::default());
        assert!(!pairs.is_empty());
        for p in &pairs {
            assert!(residual(a, p.lambda, &p.x) <= 1e-8 * a.max_abs().max(1.0), "{p:?}");
        }
    }
}

#[test]
fn spanning_nonnegative_decompositions_have_positive_spectrum() {
    for a in [hilbert_tensor(4, 3).unwrap(), positive_cauchy(&[0.5, 1.0, 1.7], 3)] {
        let pairs = h_eigen_search(&a, &SearchOptions { restarts: 100, ..Default::default() });
        assert!(pairs.iter().all(|p| p.lambda > 0.0), "{pairs:?}");
    }
}

#[test]
fn hankel_samples_are_dnn_via_their_decomposition() {
    for (m, n, r) in [(3, 3, 3), (4, 3, 4), (3, 5, 6)] {
        let cfg = ExperimentConfig::new(ExperimentKind::Hankel { r }, m, n, 1, 3);
        for id in 0..25 {
            let s = sample_hankel(&cfg, id).unwrap();
            let opts = DnnOptions {
                decomposition: Some(s.decomposition.clone()),
                search: SearchOptions { restarts: 20, ..Default::default() },
                ..Default::default()
            };
            let v = classify_dnn(&s.tensor, &opts);
            assert!(v.is_yes(), "sample {id} at ({m},{n},{r}): {v}");
        }
    }
}

#[test]
fn step0_exclusions_need_a_zero_entry() {
    let cfg = ExperimentConfig::new(ExperimentKind::Hankel { r: 3 }, 3, 3, 300, 17);
    let summary = run_experiment(&cfg).unwrap();
    for rec in summary.records.iter().filter(|r| r.excluded_by == Exclusion::Step0) {
        let s = sample_hankel(&cfg, rec.sample_id).unwrap();
        assert!(s.tensor.all_entries().any(|(_, v)| v.abs() <= cfg.eps));
    }
    let excluded = summary.records.iter().filter(|r| r.excluded_by != Exclusion::None).count();
    assert_eq!(summary.percentage(), 100.0 * excluded as f64 / 300.0);
}
