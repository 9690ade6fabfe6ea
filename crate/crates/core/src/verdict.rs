//! Three-valued classification results with checkable witnesses.

use std::fmt;

use crate::cp::dominance::{family_mean, one_duplicated_mean, DuplicateFamily};
use crate::decomposition::RankOneDecomposition;
use crate::index::MultiIndex;
use crate::spectral::EigenPair;
use crate::tensor::SymmetricTensor;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    CertifiedYes,
    CertifiedNo,
    Unknown,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::CertifiedYes => "certified-yes",
            Status::CertifiedNo => "certified-no",
            Status::Unknown => "unknown",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    /// An entry below the nonnegativity tolerance.
    NegativeEntry { index: MultiIndex, value: f64 },
    /// A zero entry whose support is contained in that of a nonzero entry.
    ZeroDominance {
        zero: MultiIndex,
        dominated: MultiIndex,
        value: f64,
    },
    /// An entry exceeding the mean over its one-duplicated family.
    OneDuplicated {
        index: MultiIndex,
        value: f64,
        mean: f64,
    },
    /// An entry exceeding the mean over a caller-supplied duplicate family.
    Duplicate {
        family: DuplicateFamily,
        value: f64,
        mean: f64,
    },
    Eigen(EigenPair),
    /// A nonnegative point where the form `A x^m` is negative.
    Point { x: Vec<f64>, value: f64 },
    /// A direction `z` with `z^T H z < 0` for a Hankel moment matrix `H`.
    Indefinite { z: Vec<f64>, value: f64 },
    /// A kernel direction `z` of the leading block of a Hankel moment matrix
    /// with `z^T b = inner != 0` for the border column `b`: no value of the
    /// free corner makes the matrix PSD.
    BorderOutsideRange { z: Vec<f64>, inner: f64 },
    Decomposition(RankOneDecomposition),
    /// A `k`-node quadrature decomposition whose reconstruction is within
    /// Frobenius distance `error` of the tensor.
    Quadrature {
        decomposition: RankOneDecomposition,
        k: usize,
        error: f64,
    },
}

impl Witness {
    /// Re-checks the witness against `a`. `None` when the witness is not a
    /// statement about the tensor entries.
    pub fn check(&self, a: &SymmetricTensor, tol: f64) -> Option<bool> {
        match self {
            Witness::NegativeEntry { index, value } => {
                Some(a.get_canonical(index) == *value && *value < 0.0)
            }
            Witness::ZeroDominance {
                zero, dominated, ..
            } => {
                let contained = zero.support().iter().all(|i| dominated.count(*i) > 0);
                Some(
                    contained
                        && a.get_canonical(zero).abs() <= tol
                        && a.get_canonical(dominated) > tol,
                )
            }
            Witness::OneDuplicated { index, .. } => {
                let value = a.get_canonical(index);
                Some(value > one_duplicated_mean(a, index))
            }
            Witness::Duplicate { family, .. } => {
                Some(a.get_canonical(family.target()) > family_mean(a, family))
            }
            Witness::Eigen(pair) => Some(pair.residual_against(a) <= tol * a.max_abs().max(1.0)),
            Witness::Point { x, .. } => {
                Some(x.iter().all(|&v| v >= 0.0) && a.evaluate(x) < 0.0)
            }
            Witness::Indefinite { .. } | Witness::BorderOutsideRange { .. } => None,
            Witness::Decomposition(d) => {
                let err = d.reconstruct().frobenius_distance(a).ok()?;
                Some(d.is_nonnegative(0.0) && err <= tol * a.frobenius_norm().max(1.0))
            }
            Witness::Quadrature {
                decomposition,
                error,
                ..
            } => {
                let err = decomposition.reconstruct().frobenius_distance(a).ok()?;
                Some(decomposition.is_nonnegative(0.0) && err <= error * (1.0 + tol) + tol)
            }
        }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::NegativeEntry { index, value } => write!(f, "entry {index} = {value:e}"),
            Witness::ZeroDominance {
                zero,
                dominated,
                value,
            } => write!(f, "zero entry {zero} dominates {dominated} = {value:e}"),
            Witness::OneDuplicated { index, value, mean } => {
                write!(f, "entry {index} = {value:e} exceeds one-duplicated mean {mean:e}")
            }
            Witness::Duplicate {
                family,
                value,
                mean,
            } => write!(
                f,
                "entry {} = {value:e} exceeds mean {mean:e} over {}-duplicate family",
                family.target(),
                family.s()
            ),
            Witness::Eigen(p) => write!(f, "{p}"),
            Witness::Point { x, value } => write!(f, "A x^m = {value:e} at x = {x:?}"),
            Witness::Indefinite { z, value } => write!(f, "z^T H z = {value:e} at z = {z:?}"),
            Witness::BorderOutsideRange { z, inner } => {
                write!(f, "kernel direction {z:?} meets the border column at {inner:e}")
            }
            Witness::Decomposition(d) => write!(f, "nonnegative decomposition with {} terms", d.len()),
            Witness::Quadrature { k, error, .. } => {
                write!(f, "{k}-node quadrature decomposition, Frobenius error {error:e}")
            }
        }
    }
}

/// Classification outcome plus the names of the tests that fired, in order.
#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub status: Status,
    pub witness: Option<Witness>,
    pub evidence: Vec<String>,
}

impl Verdict {
    pub fn yes(evidence: Vec<String>, witness: Option<Witness>) -> Self {
        Self {
            status: Status::CertifiedYes,
            witness,
            evidence,
        }
    }

    pub fn no(evidence: Vec<String>, witness: Witness) -> Self {
        Self {
            status: Status::CertifiedNo,
            witness: Some(witness),
            evidence,
        }
    }

    pub fn unknown(evidence: Vec<String>) -> Self {
        Self {
            status: Status::Unknown,
            witness: None,
            evidence,
        }
    }

    pub fn is_yes(&self) -> bool {
        self.status == Status::CertifiedYes
    }

    pub fn is_no(&self) -> bool {
        self.status == Status::CertifiedNo
    }

    pub fn is_unknown(&self) -> bool {
        self.status == Status::Unknown
    }

    /// Attached decomposition, when the certificate is one.
    pub fn decomposition(&self) -> Option<&RankOneDecomposition> {
        match &self.witness {
            Some(Witness::Decomposition(d))
            | Some(Witness::Quadrature {
                decomposition: d, ..
            }) => Some(d),
            _ => None,
        }
    }

    pub(crate) fn note(mut self, step: impl Into<String>) -> Self {
        self.evidence.push(step.into());
        self
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.status)?;
        if let Some(w) = &self.witness {
            write!(f, " ({w})")?;
        }
        if !self.evidence.is_empty() {
            write!(f, " [{}]", self.evidence.join(", "))?;
        }
        Ok(())
    }
}
