//! Pluggable search for a nonnegative decomposition, run after the cheap
//! tests leave the answer open.

use std::io::Write;
use std::process::{Command, Stdio};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::decomposition::RankOneDecomposition;
use crate::error::{Result, TensorError};
use crate::io::{decomposition_from_json, tensor_to_json};
use crate::tensor::SymmetricTensor;

pub trait Decomposer {
    fn name(&self) -> String;

    /// A candidate decomposition, or `None` when none was found. Candidates
    /// are verified by the caller.
    fn decompose(&self, a: &SymmetricTensor) -> Result<Option<RankOneDecomposition>>;
}

/// Runs `sh -c command`, writing the tensor JSON to its stdin and reading a
/// decomposition JSON or the token `NONE` from its stdout.
#[derive(Debug, Clone)]
pub struct SubprocessDecomposer {
    pub command: String,
}

impl Decomposer for SubprocessDecomposer {
    fn name(&self) -> String {
        format!("external decomposer `{}`", self.command)
    }

    fn decompose(&self, a: &SymmetricTensor) -> Result<Option<RankOneDecomposition>> {
        let fail = |msg: String| TensorError::Decomposer(format!("{}: {msg}", self.command));
        let mut child = Command::new("sh")
            .arg("-c")
            .arg(&self.command)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::inherit())
            .spawn()
            .map_err(|e| fail(e.to_string()))?;
        child
            .stdin
            .take()
            .expect("piped stdin")
            .write_all(tensor_to_json(a).as_bytes())
            .map_err(|e| fail(e.to_string()))?;
        let out = child.wait_with_output().map_err(|e| fail(e.to_string()))?;
        if !out.status.success() {
            return Err(fail(format!("exited with {}", out.status)));
        }
        let text = String::from_utf8_lossy(&out.stdout);
        if text.trim() == "NONE" {
            return Ok(None);
        }
        decomposition_from_json(&text, a.order()).map(Some)
    }
}

/// Greedy nonnegative rank-one fitting: repeatedly takes the nonnegative
/// direction that best fits the residual (projected power iteration) and
/// subtracts its optimal multiple. A heuristic that only ever proposes.
#[derive(Debug, Clone)]
pub struct GreedyDecomposer {
    pub max_terms: usize,
    pub iterations: usize,
    pub seed: u64,
    /// Accept when `|A - sum|_F <= rel_tol * |A|_F`.
    pub rel_tol: f64,
}

impl Default for GreedyDecomposer {
    fn default() -> Self {
        Self {
            max_terms: 50,
            iterations: 200,
            seed: 0,
            rel_tol: 1e-6,
        }
    }
}

impl Decomposer for GreedyDecomposer {
    fn name(&self) -> String {
        "greedy rank-one fitting".into()
    }

    fn decompose(&self, a: &SymmetricTensor) -> Result<Option<RankOneDecomposition>> {
        let m = a.order();
        let n = a.dim();
        let norm = a.frobenius_norm();
        if norm == 0.0 {
            return Ok(Some(RankOneDecomposition::new(m, vec![(1.0, vec![0.0; n])])?));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut residual = a.clone();
        let mut terms = Vec::new();
        for _ in 0..self.max_terms {
            let mut u: Vec<f64> = (0..n).map(|_| rng.random::<f64>() + 0.1).collect();
            for _ in 0..self.iterations {
                let g = residual.apply(&u);
                let next: Vec<f64> = g.iter().map(|v| v.max(0.0)).collect();
                let len = next.iter().map(|v| v * v).sum::<f64>().sqrt();
                if len == 0.0 {
                    break;
                }
                u = next.iter().map(|v| v / len).collect();
            }
            // best multiple of u^m in the Frobenius inner product; |u^m|_F = 1
            let w = residual.evaluate(&u);
            if !(w > 0.0) {
                break;
            }
            let term = RankOneDecomposition::new(m, vec![(w, u.clone())])?.reconstruct();
            residual = residual.add_scaled(&term, -1.0)?;
            terms.push((w, u));
            if residual.frobenius_norm() <= self.rel_tol * norm {
                return Ok(Some(RankOneDecomposition::new(m, terms)?));
            }
        }
        Ok(None)
    }
}
