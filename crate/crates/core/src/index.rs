//! Canonical (sorted) multi-indices of symmetric tensors.
//!
//! Indices are 0-based internally. The JSON and text formats are 1-based and
//! convert at the boundary.

use std::fmt;

/// A sorted multi-index together with the number of distinct orderings it
/// stands for in the full expansion.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex {
    indices: Vec<usize>,
    multiplicity: u64,
}

impl MultiIndex {
    /// Builds the canonical form of an arbitrary index tuple.
    pub fn new(indices: &[usize]) -> Self {
        let mut sorted = indices.to_vec();
        sorted.sort_unstable();
        Self::from_sorted(sorted)
    }

    pub(crate) fn from_sorted(indices: Vec<usize>) -> Self {
        debug_assert!(indices.windows(2).all(|w| w[0] <= w[1]));
        let multiplicity = multinomial(&indices);
        Self {
            indices,
            multiplicity,
        }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn order(&self) -> usize {
        self.indices.len()
    }

    /// Number of distinct permutations of the tuple.
    pub fn multiplicity(&self) -> u64 {
        self.multiplicity
    }

    /// Distinct values appearing in the tuple, ascending.
    pub fn support(&self) -> Vec<usize> {
        let mut s = self.indices.clone();
        s.dedup();
        s
    }

    /// Repetition count of `i`.
    pub fn count(&self, i: usize) -> usize {
        self.indices.iter().filter(|&&j| j == i).count()
    }

    pub fn is_diagonal(&self) -> bool {
        self.indices.windows(2).all(|w| w[0] == w[1])
    }

    /// The multi-index with one copy of `i` removed, if present.
    pub fn remove_one(&self, i: usize) -> Option<MultiIndex> {
        let pos = self.indices.iter().position(|&j| j == i)?;
        let mut rest = self.indices.clone();
        rest.remove(pos);
        Some(Self::from_sorted(rest))
    }

    /// 1-based copy for display and serialization.
    pub fn to_one_based(&self) -> Vec<usize> {
        self.indices.iter().map(|i| i + 1).collect()
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.to_one_based())
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.to_one_based().iter().map(|i| i.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// `m! / prod(t_i!)` for a sorted tuple with repetition counts `t_i`.
pub fn multinomial(sorted: &[usize]) -> u64 {
    let mut result: u64 = 1;
    let mut placed: u64 = 0;
    let mut run: u64 = 0;
    for (k, &v) in sorted.iter().enumerate() {
        if k > 0 && sorted[k - 1] == v {
            run += 1;
        } else {
            run = 1;
        }
        placed += 1;
        // result * placed / run stays integral: it is C(placed, run) times the previous ratio
        result = result * placed / run;
    }
    result
}

/// Number of canonical indices, `C(n + m - 1, m)`.
pub fn canonical_count(order: usize, dim: usize) -> usize {
    if dim == 0 {
        return usize::from(order == 0);
    }
    let mut c: u128 = 1;
    for k in 0..order as u128 {
        c = c * (dim as u128 + k) / (k + 1);
    }
    c as usize
}

/// Iterates all nondecreasing tuples of length `order` over `0..dim` in
/// lexicographic order.
#[derive(Debug, Clone)]
pub struct CanonicalIndices {
    dim: usize,
    current: Option<Vec<usize>>,
}

impl CanonicalIndices {
    pub fn new(order: usize, dim: usize) -> Self {
        let current = if dim == 0 && order > 0 {
            None
        } else {
            Some(vec![0; order])
        };
        Self { dim, current }
    }
}

impl Iterator for CanonicalIndices {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.take()?;
        let mut next = out.clone();
        let mut pos = next.len();
        while pos > 0 {
            pos -= 1;
            if next[pos] + 1 < self.dim {
                let v = next[pos] + 1;
                for slot in next.iter_mut().skip(pos) {
                    *slot = v;
                }
                self.current = Some(next);
                return Some(out);
            }
        }
        Some(out)
    }
}

pub fn canonical_indices(order: usize, dim: usize) -> impl Iterator<Item = MultiIndex> {
    CanonicalIndices::new(order, dim).map(MultiIndex::from_sorted)
}
