//! Multistart search for H-eigenpairs.
//!
//! Each start solves `F(x, lambda) = (A x^{m-1} - lambda x^{[m-1]}, (|x|^2 - 1)/2) = 0`
//! by Levenberg-Marquardt. Found pairs are re-verified and deduplicated;
//! the list is not guaranteed to be complete.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{dedup_pairs, EigenPair};
use crate::linalg::solve;
use crate::tensor::SymmetricTensor;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchOptions {
    pub restarts: usize,
    /// Residual acceptance, relative to the largest absolute entry.
    pub tol: f64,
    pub seed: u64,
    pub max_iter: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            restarts: 200,
            tol: 1e-10,
            seed: 0,
            max_iter: 200,
        }
    }
}

/// Multistart H-eigenpair search. Starts cycle through sign orthants: all
/// `2^n` patterns in turn when that fits in the restart budget, random
/// patterns otherwise.
pub fn h_eigen_search(a: &SymmetricTensor, opts: &SearchOptions) -> Vec<EigenPair> {
    let n = a.dim();
    let scale = a.max_abs();
    if scale == 0.0 {
        return vec![EigenPair::h(a, 0.0, &vec![1.0; n])];
    }
    let unit = a.scale(1.0 / scale);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let exhaustive = n < usize::BITS as usize && (1usize << n) <= opts.restarts;
    let mut found = Vec::new();
    for k in 0..opts.restarts {
        let mut x: Vec<f64> = (0..n)
            .map(|_| rng.sample::<f64, _>(StandardNormal).abs())
            .collect();
        for (i, xi) in x.iter_mut().enumerate() {
            let negative = if exhaustive {
                (k >> i) & 1 == 1
            } else {
                rng.random::<bool>()
            };
            if negative {
                *xi = -*xi;
            }
        }
        if let Some((lambda, x)) = levenberg_marquardt(&unit, x, opts.max_iter) {
            let pair = EigenPair::h(a, lambda * scale, &x);
            if pair.residual <= opts.tol * scale.max(1.0) {
                found.push(pair);
            }
        }
    }
    let mut out = dedup_pairs(found, 1e-6);
    out.sort_by(|p, q| p.lambda.total_cmp(&q.lambda));
    out
}

fn residual_vec(a: &SymmetricTensor, x: &[f64], lambda: f64) -> DVector<f64> {
    let p = a.order() as i32 - 1;
    let ax = a.apply(x);
    let n = x.len();
    let mut f = DVector::zeros(n + 1);
    for i in 0..n {
        f[i] = ax[i] - lambda * x[i].powi(p);
    }
    f[n] = 0.5 * (x.iter().map(|v| v * v).sum::<f64>() - 1.0);
    f
}

fn jacobian(a: &SymmetricTensor, x: &[f64], lambda: f64) -> DMatrix<f64> {
    let n = x.len();
    let m = a.order() as i32;
    let mf = a.matrix_form(x);
    let mut j = DMatrix::zeros(n + 1, n + 1);
    for r in 0..n {
        for c in 0..n {
            j[(r, c)] = (m - 1) as f64 * mf[(r, c)];
        }
        j[(r, r)] -= lambda * (m - 1) as f64 * x[r].powi(m - 2);
        j[(r, n)] = -x[r].powi(m - 1);
        j[(n, r)] = x[r];
    }
    j
}

fn levenberg_marquardt(a: &SymmetricTensor, x0: Vec<f64>, max_iter: usize) -> Option<(f64, Vec<f64>)> {
    let n = x0.len();
    let norm = x0.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm == 0.0 {
        return None;
    }
    let mut x: Vec<f64> = x0.iter().map(|v| v / norm).collect();
    let p = a.order() as i32 - 1;
    let denom: f64 = x.iter().map(|v| v * v.powi(p)).sum();
    let num: f64 = a.apply(&x).iter().zip(&x).map(|(u, v)| u * v).sum();
    let mut lambda = if denom.abs() > 1e-8 { num / denom } else { num };
    let mut f = residual_vec(a, &x, lambda);
    let mut cost = f.norm_squared();
    let mut mu = 1e-3;
    for _ in 0..max_iter {
        if f.amax() < 1e-14 {
            break;
        }
        let j = jacobian(a, &x, lambda);
        let jt = j.transpose();
        let g = &jt * &f;
        let h = &jt * &j;
        let mut improved = false;
        for _ in 0..30 {
            let mut damped = h.clone();
            for d in 0..=n {
                damped[(d, d)] += mu * (1.0 + h[(d, d)]);
            }
            let Some(step) = solve(damped, &(-&g)) else {
                mu *= 10.0;
                continue;
            };
            let xt: Vec<f64> = x.iter().zip(step.iter()).map(|(a, b)| a + b).collect();
            let lt = lambda + step[n];
            let ft = residual_vec(a, &xt, lt);
            let ct = ft.norm_squared();
            if ct < cost {
                x = xt;
                lambda = lt;
                f = ft;
                cost = ct;
                mu = (mu / 3.0).max(1e-15);
                improved = true;
                break;
            }
            mu *= 4.0;
        }
        if !improved {
            break;
        }
    }
    (f.amax() < 1e-9).then_some((lambda, x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::RankOneDecomposition;
    use crate::spectral::{h_spectrum_dim2, nqz_spectral_radius};

    #[test]
    fn diagonal_search_matches_exact() {
        let d = SymmetricTensor::diagonal(3, &[2.0, 5.0]).unwrap();
        let found = h_eigen_search(&d, &SearchOptions::default());
        let exact = h_spectrum_dim2(&d).unwrap();
        let mut fl: Vec<f64> = found.iter().map(|p| p.lambda).collect();
        let mut el: Vec<f64> = exact.iter().map(|p| p.lambda).collect();
        fl.dedup_by(|a, b| (*a - *b).abs() < 1e-8);
        el.dedup_by(|a, b| (*a - *b).abs() < 1e-8);
        assert_eq!(fl.len(), el.len());
        for (a, b) in fl.iter().zip(&el) {
            assert!((a - b).abs() < 1e-8);
        }
    }

    #[test]
    fn largest_matches_radius() {
        let a = SymmetricTensor::from_fn(3, 3, |idx| 1.0 / (1.0 + idx.iter().sum::<usize>() as f64)).unwrap();
        let found = h_eigen_search(&a, &SearchOptions::default());
        let r = nqz_spectral_radius(&a, 1e-13, 10_000).unwrap();
        assert!(r.converged);
        let top = found.last().unwrap().lambda;
        assert!((top - r.hi).abs() < 1e-6, "{top} vs {r:?}");
    }

    #[test]
    fn pairs_reverify() {
        let a = RankOneDecomposition::from_vectors(
            3,
            vec![vec![1.0, 0.0, -1.0], vec![-1.0, 0.0, 0.0], vec![1.0, 1.0, 1.0]],
        )
        .unwrap()
        .reconstruct();
        let opts = SearchOptions { seed: 7, ..Default::default() };
        for p in h_eigen_search(&a, &opts) {
            assert!(p.residual_against(&a) <= 1e-10 * a.max_abs());
        }
    }

    #[test]
    fn deterministic_given_seed() {
        let a = SymmetricTensor::from_fn(4, 3, |idx| (idx.iter().sum::<usize>() as f64).sin()).unwrap();
        let opts = SearchOptions { restarts: 40, seed: 3, ..Default::default() };
        assert_eq!(h_eigen_search(&a, &opts), h_eigen_search(&a, &opts));
    }
}
