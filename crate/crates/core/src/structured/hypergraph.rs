use std::collections::BTreeSet;

use crate::error::{Result, TensorError};
use crate::index::MultiIndex;
use crate::tensor::SymmetricTensor;

/// An `m`-uniform hypergraph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    n: usize,
    m: usize,
    edges: BTreeSet<Vec<usize>>,
}

impl Hypergraph {
    /// Edges are given as vertex lists (0-based) and stored sorted.
    pub fn new(n: usize, m: usize, edges: Vec<Vec<usize>>) -> Result<Self> {
        if m < 2 {
            return Err(TensorError::InvalidShape(format!(
                "edge cardinality must be at least 2, got {m}"
            )));
        }
        if n < 1 {
            return Err(TensorError::InvalidShape("hypergraph has no vertices".into()));
        }
        let mut set = BTreeSet::new();
        for mut e in edges {
            if e.len() != m {
                return Err(TensorError::InvalidParameter(format!(
                    "edge {e:?} has {} vertices, expected {m}",
                    e.len()
                )));
            }
            e.sort_unstable();
            if e.windows(2).any(|w| w[0] == w[1]) {
                return Err(TensorError::InvalidParameter(format!(
                    "edge {:?} repeats a vertex",
                    e.iter().map(|v| v + 1).collect::<Vec<_>>()
                )));
            }
            if let Some(&v) = e.iter().find(|&&v| v >= n) {
                return Err(TensorError::IndexOutOfRange {
                    index: vec![v],
                    dim: n,
                });
            }
            set.insert(e);
        }
        Ok(Self { n, m, edges: set })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_size(&self) -> usize {
        self.m
    }

    pub fn edges(&self) -> impl Iterator<Item = &[usize]> {
        self.edges.iter().map(Vec::as_slice)
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for e in &self.edges {
            for &v in e {
                d[v] += 1;
            }
        }
        d
    }

    /// `1/(m-1)!` on every ordering of each edge.
    pub fn adjacency(&self) -> SymmetricTensor {
        let w = 1.0 / (1..self.m).product::<usize>() as f64;
        SymmetricTensor::from_entries(
            self.m,
            self.n,
            self.edges.iter().map(|e| (e.clone(), w)),
        )
        .expect("edges validated")
    }

    /// Degree diagonal plus adjacency.
    pub fn signless_laplacian(&self) -> SymmetricTensor {
        let mut q = self.adjacency();
        for (v, d) in self.degrees().into_iter().enumerate() {
            if d > 0 {
                q = q.with_entry(&vec![v; self.m], d as f64).expect("in range");
            }
        }
        q
    }

    /// Recovers the hypergraph when `q` has exactly the signless Laplacian
    /// pattern: off-diagonal entries are `1/(m-1)!` on tuples of distinct
    /// vertices and zero elsewhere, and the diagonal holds the degrees.
    pub fn from_signless_laplacian(q: &SymmetricTensor, tol: f64) -> Option<Self> {
        let m = q.order();
        let w = 1.0 / (1..m).product::<usize>() as f64;
        let mut edges = Vec::new();
        for (idx, v) in q.entries() {
            if idx.is_diagonal() {
                continue;
            }
            if !all_distinct(idx) || (v - w).abs() > tol * w {
                return None;
            }
            edges.push(idx.indices().to_vec());
        }
        let g = Self::new(q.dim(), m, edges).ok()?;
        let degrees_match = g
            .degrees()
            .iter()
            .enumerate()
            .all(|(i, &d)| (q.get(&vec![i; m]) - d as f64).abs() <= tol * (d as f64).max(1.0));
        degrees_match.then_some(g)
    }
}

fn all_distinct(idx: &MultiIndex) -> bool {
    idx.indices().windows(2).all(|w| w[0] != w[1])
}
