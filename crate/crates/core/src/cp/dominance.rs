//! Entry dominance properties that every completely positive tensor has.

use std::collections::BTreeMap;

use crate::error::{Result, TensorError};
use crate::index::MultiIndex;
use crate::tensor::SymmetricTensor;
use crate::verdict::{Verdict, Witness};

/// Relative slack before an entry counts as exceeding a family mean, so
/// rounding in the mean cannot fake a violation.
const MEAN_SLACK: f64 = 1e-10;

fn exceeds(value: f64, mean: f64) -> bool {
    value > mean * (1.0 + MEAN_SLACK) + 1e-12
}

/// Result of propagating zero entries to every index whose support
/// contains the zero's support.
#[derive(Debug, Clone, PartialEq)]
pub struct Closure {
    pub tensor: SymmetricTensor,
    /// `|A - B|_F > eps`.
    pub changed: bool,
    /// First nonzero entry (canonical order) that the closure removed.
    pub witness: Option<Witness>,
}

fn support_mask(idx: &MultiIndex) -> u128 {
    idx.indices().iter().fold(0, |m, &i| m | (1u128 << i))
}

/// Zero-entry closure with zero threshold `eps`.
pub fn zero_entry_closure(a: &SymmetricTensor, eps: f64) -> Result<Closure> {
    if a.dim() > 128 {
        return Err(TensorError::InvalidShape(format!(
            "zero-entry closure supports dimension at most 128, got {}",
            a.dim()
        )));
    }
    if let Some((idx, value)) = a.first_negative(eps) {
        return Err(TensorError::NegativeEntry {
            index: idx.to_one_based(),
            value,
        });
    }
    // smallest zero index for each zero support
    let mut zero_supports: BTreeMap<u128, MultiIndex> = BTreeMap::new();
    for (idx, v) in a.all_entries() {
        if v.abs() <= eps {
            zero_supports.entry(support_mask(&idx)).or_insert(idx);
        }
    }
    let mut witness = None;
    let tensor = a.map_values(|idx, v| {
        if v.abs() <= eps {
            return v;
        }
        let mask = support_mask(idx);
        let dominating = zero_supports
            .iter()
            .filter(|(z, _)| *z & mask == **z)
            .map(|(_, zi)| zi)
            .min();
        match dominating {
            Some(zero) => {
                if witness.is_none() {
                    witness = Some(Witness::ZeroDominance {
                        zero: zero.clone(),
                        dominated: idx.clone(),
                        value: v,
                    });
                }
                0.0
            }
            None => v,
        }
    });
    let changed = tensor.frobenius_distance(a)? > eps;
    Ok(Closure {
        tensor,
        changed,
        witness,
    })
}

/// The `m(m-1)` tuples obtained by overwriting position `p` with the value at
/// position `q != p`, in `(p, q)` lexicographic order.
pub fn one_duplicated_family(idx: &[usize]) -> Vec<Vec<usize>> {
    let m = idx.len();
    let mut out = Vec::with_capacity(m * (m - 1));
    for p in 0..m {
        for q in (0..m).filter(|&q| q != p) {
            let mut t = idx.to_vec();
            t[p] = idx[q];
            out.push(t);
        }
    }
    out
}

/// Mean of the entries over the one-duplicated family of `idx`.
pub fn one_duplicated_mean(a: &SymmetricTensor, idx: &MultiIndex) -> f64 {
    let family = one_duplicated_family(idx.indices());
    let n = family.len() as f64;
    family.iter().map(|t| a.get(t)).sum::<f64>() / n
}

/// First canonical index whose entry exceeds its one-duplicated mean.
pub fn one_duplicated_violation(a: &SymmetricTensor) -> Option<Witness> {
    a.entries().find_map(|(idx, value)| {
        if idx.is_diagonal() {
            return None;
        }
        let mean = one_duplicated_mean(a, idx);
        exceeds(value, mean).then(|| Witness::OneDuplicated {
            index: idx.clone(),
            value,
            mean,
        })
    })
}

/// One-duplicated dominance: a violation rules complete positivity out;
/// passing proves nothing, so the verdict is then unknown.
pub fn one_duplicated_check(a: &SymmetricTensor) -> Verdict {
    let evidence = vec!["one-duplicated dominance".to_string()];
    match one_duplicated_violation(a) {
        Some(w) => Verdict::no(evidence, w),
        None => Verdict::unknown(evidence),
    }
}

/// `s` index tuples whose per-index multiplicities are `s` times those of
/// the target.
#[derive(Debug, Clone, PartialEq)]
pub struct DuplicateFamily {
    target: MultiIndex,
    members: Vec<MultiIndex>,
}

impl DuplicateFamily {
    pub fn new(target: MultiIndex, members: Vec<MultiIndex>) -> Result<Self> {
        let s = members.len();
        if s == 0 {
            return Err(TensorError::InvalidFamily("family has no members".into()));
        }
        if let Some(bad) = members.iter().find(|t| t.order() != target.order()) {
            return Err(TensorError::InvalidFamily(format!(
                "member {bad} has order {} instead of {}",
                bad.order(),
                target.order()
            )));
        }
        let support = target.support();
        if let Some(bad) = members
            .iter()
            .find(|t| t.support().iter().any(|i| !support.contains(i)))
        {
            return Err(TensorError::InvalidFamily(format!(
                "member {bad} leaves the support of {target}"
            )));
        }
        for &i in &support {
            let total: usize = members.iter().map(|t| t.count(i)).sum();
            let want = s * target.count(i);
            if total != want {
                return Err(TensorError::InvalidFamily(format!(
                    "index {} appears {total} times across members, expected {want}",
                    i + 1
                )));
            }
        }
        Ok(Self { target, members })
    }

    /// The one-duplicated family of `target` as an `m(m-1)`-duplicate.
    pub fn one_duplicated(target: &MultiIndex) -> Self {
        let members = one_duplicated_family(target.indices())
            .iter()
            .map(|t| MultiIndex::new(t))
            .collect();
        Self::new(target.clone(), members).expect("one-duplicated family is valid")
    }

    pub fn target(&self) -> &MultiIndex {
        &self.target
    }

    pub fn members(&self) -> &[MultiIndex] {
        &self.members
    }

    pub fn s(&self) -> usize {
        self.members.len()
    }
}

pub fn family_mean(a: &SymmetricTensor, family: &DuplicateFamily) -> f64 {
    family.members.iter().map(|t| a.get_canonical(t)).sum::<f64>() / family.s() as f64
}

/// `s^{-1} sum_p a_{I_p} >= a_J`; a violation rules complete positivity out.
pub fn s_duplicate_verify(a: &SymmetricTensor, family: &DuplicateFamily) -> Result<Verdict> {
    if family.target.order() != a.order() {
        return Err(TensorError::ShapeMismatch(format!(
            "family order {} vs tensor order {}",
            family.target.order(),
            a.order()
        )));
    }
    if let Some(&i) = family.target.support().iter().find(|&&i| i >= a.dim()) {
        return Err(TensorError::IndexOutOfRange {
            index: vec![i + 1],
            dim: a.dim(),
        });
    }
    let value = a.get_canonical(&family.target);
    let mean = family_mean(a, family);
    let evidence = vec![format!("{}-duplicate dominance", family.s())];
    Ok(if exceeds(value, mean) {
        Verdict::no(
            evidence,
            Witness::Duplicate {
                family: family.clone(),
                value,
                mean,
            },
        )
    } else {
        Verdict::unknown(evidence)
    })
}
