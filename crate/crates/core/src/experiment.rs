//! Randomized preprocessing experiments on shifted complete Hankel tensors
//! and on random symmetric nonnegative tensors.

use std::fmt;
use std::io::Write;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::cp::{one_duplicated_violation, zero_entry_closure};
use crate::decomposition::RankOneDecomposition;
use crate::error::{Result, TensorError};
use crate::index::canonical_indices;
use crate::structured::vandermonde_sum;
use crate::tensor::SymmetricTensor;
use crate::verdict::Witness;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExperimentKind {
    /// Vandermonde sums of `r` standard normal nodes.
    Hankel { r: usize },
    /// Basis coefficients `randn + t`.
    Symmetric { t: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub order: usize,
    pub dim: usize,
    pub samples: usize,
    pub seed: u64,
    pub eps: f64,
    /// Worker threads; 0 lets the pool decide.
    pub workers: usize,
    /// Record per-sample wall time. Off keeps the CSV reproducible.
    pub record_timing: bool,
}

impl ExperimentConfig {
    pub fn new(kind: ExperimentKind, order: usize, dim: usize, samples: usize, seed: u64) -> Self {
        Self {
            kind,
            order,
            dim,
            samples,
            seed,
            eps: 1e-12,
            workers: 0,
            record_timing: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(TensorError::InvalidParameter(msg));
        if self.samples == 0 {
            return bad("at least one sample is required".into());
        }
        if self.order < 2 || self.dim < 1 {
            return bad(format!("order {} and dimension {}", self.order, self.dim));
        }
        match self.kind {
            ExperimentKind::Hankel { r: 0 } => bad("hankel experiments need r >= 1".into()),
            ExperimentKind::Symmetric { t } if !(t >= 0.0) => {
                bad(format!("symmetric experiments need t >= 0, got {t}"))
            }
            _ => Ok(()),
        }
    }
}

/// Independent stream per sample, so results do not depend on scheduling.
pub fn sample_rng(seed: u64, sample_id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(sample_id);
    rng
}

/// A generated tensor with its shift and a decomposition of it.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub tensor: SymmetricTensor,
    /// `min(min entry of B, 0)`; the tensor is `B - alpha e^m`.
    pub alpha: f64,
    pub decomposition: RankOneDecomposition,
}

fn shift_by_min(
    b: SymmetricTensor,
    mut decomposition: RankOneDecomposition,
) -> Result<Sample> {
    let alpha = b.min_entry().min(0.0);
    let (order, dim) = (b.order(), b.dim());
    let tensor = if alpha < 0.0 {
        let mut terms = decomposition.terms().to_vec();
        terms.push((-alpha, vec![1.0; dim]));
        decomposition = RankOneDecomposition::new(order, terms)?;
        b.add_scaled(&SymmetricTensor::ones(order, dim)?, -alpha)?
    } else {
        b
    };
    Ok(Sample {
        tensor,
        alpha,
        decomposition,
    })
}

/// `sum_k (1, xi_k, .., xi_k^{n-1})^m` shifted to be nonnegative.
pub fn hankel_from_xi(xi: &[f64], order: usize, dim: usize) -> Result<Sample> {
    let (b, d) = vandermonde_sum(xi, &vec![1.0; xi.len()], order, dim)?;
    shift_by_min(b, d)
}

pub fn sample_hankel(cfg: &ExperimentConfig, sample_id: u64) -> Result<Sample> {
    let ExperimentKind::Hankel { r } = cfg.kind else {
        return Err(TensorError::InvalidParameter("not a hankel experiment".into()));
    };
    let mut rng = sample_rng(cfg.seed, sample_id);
    let xi: Vec<f64> = (0..r).map(|_| rng.sample(StandardNormal)).collect();
    hankel_from_xi(&xi, cfg.order, cfg.dim)
}

/// `sum_I c_I (e_{i_1} + .. + e_{i_m})^m` over canonical `I` (coefficients
/// in canonical order), shifted to be nonnegative.
pub fn symmetric_from_coefficients(coeffs: &[f64], order: usize, dim: usize) -> Result<Sample> {
    let indices: Vec<_> = canonical_indices(order, dim).collect();
    if coeffs.len() != indices.len() {
        return Err(TensorError::InvalidParameter(format!(
            "{} coefficients for {} canonical indices",
            coeffs.len(),
            indices.len()
        )));
    }
    let terms = indices
        .iter()
        .zip(coeffs)
        .map(|(idx, &c)| {
            let mut w = vec![0.0; dim];
            for &i in idx.indices() {
                w[i] += 1.0;
            }
            (c, w)
        })
        .collect();
    let d = RankOneDecomposition::new(order, terms)?;
    shift_by_min(d.reconstruct(), d)
}

pub fn sample_symmetric(cfg: &ExperimentConfig, sample_id: u64) -> Result<Sample> {
    let ExperimentKind::Symmetric { t } = cfg.kind else {
        return Err(TensorError::InvalidParameter("not a symmetric experiment".into()));
    };
    let mut rng = sample_rng(cfg.seed, sample_id);
    let count = canonical_indices(cfg.order, cfg.dim).count();
    let coeffs: Vec<f64> = (0..count)
        .map(|_| rng.sample::<f64, _>(StandardNormal) + t)
        .collect();
    symmetric_from_coefficients(&coeffs, cfg.order, cfg.dim)
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepOutcome {
    pub passed: bool,
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PreprocessReport {
    pub step0: StepOutcome,
    /// Absent when step 0 already excluded the tensor.
    pub step1: Option<StepOutcome>,
    /// Both steps passed; the tensor would go on to a decomposition search.
    pub forwarded: bool,
}

impl PreprocessReport {
    pub fn exclusion(&self) -> Exclusion {
        if !self.step0.passed {
            Exclusion::Step0
        } else if self.step1.as_ref().is_some_and(|s| !s.passed) {
            Exclusion::Step1
        } else {
            Exclusion::None
        }
    }
}

/// Zero-entry closure, then one-duplicated dominance.
pub fn preprocess_pipeline(a: &SymmetricTensor, eps: f64) -> Result<PreprocessReport> {
    let closure = zero_entry_closure(a, eps)?;
    if closure.changed {
        return Ok(PreprocessReport {
            step0: StepOutcome {
                passed: false,
                witness: closure.witness,
            },
            step1: None,
            forwarded: false,
        });
    }
    let violation = one_duplicated_violation(a);
    let passed = violation.is_none();
    Ok(PreprocessReport {
        step0: StepOutcome {
            passed: true,
            witness: None,
        },
        step1: Some(StepOutcome {
            passed,
            witness: violation,
        }),
        forwarded: passed,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Exclusion {
    Step0,
    Step1,
    None,
}

impl fmt::Display for Exclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Exclusion::Step0 => "step0",
            Exclusion::Step1 => "step1",
            Exclusion::None => "none",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRecord {
    pub sample_id: u64,
    pub alpha: f64,
    pub excluded_by: Exclusion,
    pub elapsed_ms: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSummary {
    pub records: Vec<ExperimentRecord>,
}

impl ExperimentSummary {
    pub fn count(&self, e: Exclusion) -> usize {
        self.records.iter().filter(|r| r.excluded_by == e).count()
    }

    pub fn excluded(&self) -> usize {
        self.records.len() - self.count(Exclusion::None)
    }

    /// Excluded share in percent, from integer counts.
    pub fn percentage(&self) -> f64 {
        100.0 * self.excluded() as f64 / self.records.len() as f64
    }
}

fn run_sample(cfg: &ExperimentConfig, id: u64) -> Result<ExperimentRecord> {
    let start = Instant::now();
    let sample = match cfg.kind {
        ExperimentKind::Hankel { .. } => sample_hankel(cfg, id),
        ExperimentKind::Symmetric { .. } => sample_symmetric(cfg, id),
    }?;
    let report = preprocess_pipeline(&sample.tensor, cfg.eps)?;
    Ok(ExperimentRecord {
        sample_id: id,
        alpha: sample.alpha,
        excluded_by: report.exclusion(),
        elapsed_ms: cfg
            .record_timing
            .then(|| start.elapsed().as_secs_f64() * 1e3),
    })
}

/// Generates and preprocesses every sample; records come back in
/// `sample_id` order whatever the worker count.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentSummary> {
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| TensorError::InvalidParameter(format!("thread pool: {e}")))?;
    let records = pool.install(|| {
        (0..cfg.samples as u64)
            .into_par_iter()
            .map(|id| {
                run_sample(cfg, id).map_err(|e| TensorError::Sample {
                    id,
                    source: Box::new(e),
                })
            })
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(ExperimentSummary { records })
}

pub const CSV_HEADER: [&str; 4] = ["sample_id", "alpha", "excluded_by", "elapsed_ms"];

/// Writes `sample_id,alpha,excluded_by,elapsed_ms`; the time column is
/// empty when timing was off.
pub fn write_csv<W: Write>(records: &[ExperimentRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)
        .map_err(|e| TensorError::Io(e.to_string()))?;
    for r in records {
        let elapsed = r.elapsed_ms.map(|t| format!("{t:.3}")).unwrap_or_default();
        w.write_record([
            r.sample_id.to_string(),
            r.alpha.to_string(),
            r.excluded_by.to_string(),
            elapsed,
        ])
        .map_err(|e| TensorError::Sample {
            id: r.sample_id,
            source: Box::new(TensorError::Io(e.to_string())),
        })?;
    }
    w.flush().map_err(|e| TensorError::Io(e.to_string()))
}
