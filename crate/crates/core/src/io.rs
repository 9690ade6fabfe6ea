//! JSON and text formats. Indices are 1-based on disk.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::decomposition::RankOneDecomposition;
use crate::error::{Result, TensorError};
use crate::index::MultiIndex;
use crate::structured::Hypergraph;
use crate::tensor::SymmetricTensor;
use crate::verdict::{Verdict, Witness};

#[derive(Serialize, Deserialize)]
struct EntryJson {
    idx: Vec<usize>,
    val: f64,
}

#[derive(Serialize, Deserialize)]
struct TensorJson {
    order: usize,
    dim: usize,
    entries: Vec<EntryJson>,
}

fn parse_err(e: serde_json::Error) -> TensorError {
    TensorError::Parse(e.to_string())
}

pub fn tensor_to_json(a: &SymmetricTensor) -> String {
    let doc = TensorJson {
        order: a.order(),
        dim: a.dim(),
        entries: a
            .entries()
            .map(|(idx, val)| EntryJson {
                idx: idx.to_one_based(),
                val,
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("plain data serializes")
}

/// Reads the tensor format; every `idx` must be 1-based and nondecreasing.
pub fn tensor_from_json(text: &str) -> Result<SymmetricTensor> {
    let doc: TensorJson = serde_json::from_str(text).map_err(parse_err)?;
    let mut entries = Vec::with_capacity(doc.entries.len());
    for e in doc.entries {
        if e.idx.len() != doc.order {
            return Err(TensorError::Parse(format!(
                "index {:?} has length {}, expected {}",
                e.idx,
                e.idx.len(),
                doc.order
            )));
        }
        if e.idx.windows(2).any(|w| w[0] > w[1]) {
            return Err(TensorError::NonCanonicalIndex(e.idx));
        }
        if let Some(&bad) = e.idx.iter().find(|&&i| i == 0 || i > doc.dim) {
            return Err(TensorError::IndexOutOfRange {
                index: vec![bad],
                dim: doc.dim,
            });
        }
        entries.push((e.idx.iter().map(|i| i - 1).collect::<Vec<_>>(), e.val));
    }
    SymmetricTensor::from_entries(doc.order, doc.dim, entries)
}

#[derive(Serialize, Deserialize)]
struct DecompositionJson {
    weights: Vec<f64>,
    vectors: Vec<Vec<f64>>,
}

pub fn decomposition_to_json(d: &RankOneDecomposition) -> String {
    let doc = DecompositionJson {
        weights: d.terms().iter().map(|(w, _)| *w).collect(),
        vectors: d.terms().iter().map(|(_, u)| u.clone()).collect(),
    };
    serde_json::to_string_pretty(&doc).expect("plain data serializes")
}

/// The format carries no order; the caller supplies the tensor's.
pub fn decomposition_from_json(text: &str, order: usize) -> Result<RankOneDecomposition> {
    let doc: DecompositionJson = serde_json::from_str(text).map_err(parse_err)?;
    if doc.weights.len() != doc.vectors.len() {
        return Err(TensorError::Parse(format!(
            "{} weights for {} vectors",
            doc.weights.len(),
            doc.vectors.len()
        )));
    }
    RankOneDecomposition::new(order, doc.weights.into_iter().zip(doc.vectors).collect())
}

#[derive(Serialize, Deserialize)]
struct GeneratingJson {
    kind: String,
    #[serde(default)]
    base: Option<usize>,
    values: Vec<f64>,
}

/// Generating vector file: either a bare JSON array or
/// `{"kind": .., "base": 0, "values": [..]}`. Hankel vectors must declare base 0.
pub fn generating_vector_from_json(text: &str) -> Result<(Option<String>, Vec<f64>)> {
    let value: Value = serde_json::from_str(text).map_err(parse_err)?;
    if value.is_array() {
        let v: Vec<f64> = serde_json::from_value(value).map_err(parse_err)?;
        return Ok((None, v));
    }
    let doc: GeneratingJson = serde_json::from_value(value).map_err(parse_err)?;
    if doc.kind == "hankel" && doc.base != Some(0) {
        return Err(TensorError::Parse(
            "hankel generating vectors must declare \"base\": 0".into(),
        ));
    }
    Ok((Some(doc.kind), doc.values))
}

pub fn generating_vector_to_json(kind: &str, values: &[f64]) -> String {
    let doc = GeneratingJson {
        kind: kind.to_string(),
        base: (kind == "hankel").then_some(0),
        values: values.to_vec(),
    };
    serde_json::to_string_pretty(&doc).expect("plain data serializes")
}

/// First line `n m`, then one edge per line as 1-based vertex ids.
pub fn hypergraph_from_text(text: &str) -> Result<Hypergraph> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines
        .next()
        .ok_or_else(|| TensorError::Parse("empty hypergraph file".into()))?;
    let nums = parse_usizes(header)?;
    let [n, m] = nums[..] else {
        return Err(TensorError::Parse(format!("header {header:?} is not \"n m\"")));
    };
    let mut edges = Vec::new();
    for line in lines {
        let e = parse_usizes(line)?;
        if e.iter().any(|&v| v == 0 || v > n) {
            return Err(TensorError::Parse(format!("edge {line:?} has a vertex outside 1..{n}")));
        }
        edges.push(e.into_iter().map(|v| v - 1).collect());
    }
    Hypergraph::new(n, m, edges)
}

pub fn hypergraph_to_text(g: &Hypergraph) -> String {
    let mut out = format!("{} {}\n", g.vertex_count(), g.edge_size());
    for e in g.edges() {
        let ids: Vec<String> = e.iter().map(|v| (v + 1).to_string()).collect();
        out.push_str(&ids.join(" "));
        out.push('\n');
    }
    out
}

fn parse_usizes(line: &str) -> Result<Vec<usize>> {
    line.split_whitespace()
        .map(|t| {
            t.parse()
                .map_err(|_| TensorError::Parse(format!("not a nonnegative integer: {t:?}")))
        })
        .collect()
}

/// Reads a real vector from a JSON array.
pub fn vector_from_json(text: &str) -> Result<Vec<f64>> {
    serde_json::from_str(text).map_err(parse_err)
}

fn idx_json(idx: &MultiIndex) -> Value {
    json!(idx.to_one_based())
}

pub fn witness_json(w: &Witness) -> Value {
    match w {
        Witness::NegativeEntry { index, value } => {
            json!({"kind": "negative-entry", "idx": idx_json(index), "value": value})
        }
        Witness::ZeroDominance {
            zero,
            dominated,
            value,
        } => json!({
            "kind": "zero-dominance",
            "zero": idx_json(zero),
            "dominated": idx_json(dominated),
            "value": value
        }),
        Witness::OneDuplicated { index, value, mean } => json!({
            "kind": "one-duplicated",
            "idx": idx_json(index),
            "value": value,
            "mean": mean
        }),
        Witness::Duplicate {
            family,
            value,
            mean,
        } => json!({
            "kind": "duplicate",
            "target": idx_json(family.target()),
            "members": family.members().iter().map(idx_json).collect::<Vec<_>>(),
            "value": value,
            "mean": mean
        }),
        Witness::Eigen(p) => json!({
            "kind": "eigenpair",
            "eigen_kind": p.kind.to_string(),
            "lambda": p.lambda,
            "x": p.x,
            "residual": p.residual
        }),
        Witness::Point { x, value } => json!({"kind": "point", "x": x, "value": value}),
        Witness::Indefinite { z, value } => json!({"kind": "indefinite", "z": z, "value": value}),
        Witness::BorderOutsideRange { z, inner } => {
            json!({"kind": "border-outside-range", "z": z, "inner": inner})
        }
        Witness::Decomposition(d) => decomposition_value(d, None),
        Witness::Quadrature {
            decomposition,
            k,
            error,
        } => decomposition_value(decomposition, Some((*k, *error))),
    }
}

fn decomposition_value(d: &RankOneDecomposition, quadrature: Option<(usize, f64)>) -> Value {
    let mut v = json!({
        "kind": "decomposition",
        "weights": d.terms().iter().map(|(w, _)| *w).collect::<Vec<_>>(),
        "vectors": d.terms().iter().map(|(_, u)| u.clone()).collect::<Vec<_>>()
    });
    if let Some((k, error)) = quadrature {
        v["kind"] = json!("quadrature");
        v["nodes"] = json!(k);
        v["frobenius_error"] = json!(error);
    }
    v
}

pub fn verdict_json(v: &Verdict) -> Value {
    json!({
        "status": v.status.to_string(),
        "witness": v.witness.as_ref().map(witness_json),
        "evidence": v.evidence
    })
}
