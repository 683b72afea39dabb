//! Whitespace-separated edge lists: multiplex (`layer src dst [weight]`) and
//! plain (`src dst [weight]`).

use std::collections::{BTreeMap, HashSet};

use thiserror::Error;

use crate::embed::{from_homogeneous_weighted, from_multiplex};
use crate::graph::{GraphError, Hmn};

/// Node ids above this are rejected; ids are used as given, so the node count
/// is the largest id plus one.
pub const MAX_NODE_ID: u32 = 10_000_000;
/// Multiplex inputs whose node count times layer count exceeds this are
/// rejected.
pub const MAX_LAYERED_NODES: u64 = 20_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TextError {
    #[error("input is not valid UTF-8 (byte {offset})")]
    Utf8 { offset: usize },
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: self-loop on node {node}")]
    SelfLoop { line: usize, node: u32 },
    #[error("no edge records found")]
    Empty,
    #[error("{nodes} nodes in {layers} layers exceeds the limit of {MAX_LAYERED_NODES} layered nodes")]
    TooLarge { nodes: u32, layers: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

struct Record {
    layer: Option<u64>,
    src: u32,
    dst: u32,
    weight: f64,
}

fn parse_records(bytes: &[u8], with_layer: bool) -> Result<Vec<Record>, TextError> {
    let text = std::str::from_utf8(bytes).map_err(|e| TextError::Utf8 {
        offset: e.valid_up_to(),
    })?;
    let mut out = Vec::new();
    let min_fields = if with_layer { 3 } else { 2 };
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        let fields: Vec<&str> = content.split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        let malformed = |message: String| TextError::Malformed { line, message };
        if fields.len() != min_fields && fields.len() != min_fields + 1 {
            return Err(malformed(format!(
                "expected {} or {} fields, found {}",
                min_fields,
                min_fields + 1,
                fields.len()
            )));
        }
        let id = |f: &str| -> Result<u32, TextError> {
            let v: u32 = f
                .parse()
                .map_err(|_| malformed(format!("not a node id: {f:?}")))?;
            if v > MAX_NODE_ID {
                return Err(malformed(format!("node id {v} exceeds {MAX_NODE_ID}")));
            }
            Ok(v)
        };
        let (layer, rest) = if with_layer {
            let l: u64 = fields[0]
                .parse()
                .map_err(|_| malformed(format!("not a layer id: {:?}", fields[0])))?;
            (Some(l), &fields[1..])
        } else {
            (None, &fields[..])
        };
        let src = id(rest[0])?;
        let dst = id(rest[1])?;
        if src == dst {
            return Err(TextError::SelfLoop { line, node: src });
        }
        let weight = match rest.get(2) {
            None => 1.0,
            Some(w) => {
                let w: f64 = w
                    .parse()
                    .map_err(|_| malformed(format!("not a weight: {w:?}")))?;
                if !(w > 0.0 && w.is_finite()) {
                    return Err(malformed(format!("weight must be positive and finite, found {w}")));
                }
                w
            }
        };
        out.push(Record {
            layer,
            src,
            dst,
            weight,
        });
    }
    if out.is_empty() {
        return Err(TextError::Empty);
    }
    Ok(out)
}

/// Reads a multiplex edge list. Every node id up to the largest one seen is
/// present in every layer; layers are ordered by numeric label and named after
/// it. Repeated edges (in either orientation) keep their first weight.
pub fn read_multiplex(bytes: &[u8]) -> Result<Hmn, TextError> {
    let records = parse_records(bytes, true)?;
    let n = records.iter().map(|r| r.src.max(r.dst)).max().unwrap_or(0) + 1;
    let mut per_layer: BTreeMap<u64, Vec<(u32, u32, f64)>> = BTreeMap::new();
    let mut seen: HashSet<(u64, u32, u32)> = HashSet::new();
    for r in records {
        let layer = r.layer.expect("multiplex records carry a layer");
        let key = (layer, r.src.min(r.dst), r.src.max(r.dst));
        if seen.insert(key) {
            per_layer
                .entry(layer)
                .or_default()
                .push((r.src, r.dst, r.weight));
        }
    }
    if n as u64 * per_layer.len() as u64 > MAX_LAYERED_NODES {
        return Err(TextError::TooLarge {
            nodes: n,
            layers: per_layer.len(),
        });
    }
    let names: Vec<String> = per_layer.keys().map(u64::to_string).collect();
    let edges: Vec<Vec<(u32, u32, f64)>> = per_layer.into_values().collect();
    Ok(from_multiplex(n, &edges, Some(&names))?)
}

/// Reads a plain edge list into a single-layer network. Repeated edges keep
/// their first weight; on undirected input both orientations count as the same
/// edge.
pub fn read_edgelist(bytes: &[u8], directed: bool) -> Result<Hmn, TextError> {
    let records = parse_records(bytes, false)?;
    let n = records.iter().map(|r| r.src.max(r.dst)).max().unwrap_or(0) + 1;
    let mut seen: HashSet<(u32, u32)> = HashSet::new();
    let mut edges = Vec::with_capacity(records.len());
    for r in records {
        let key = if directed {
            (r.src, r.dst)
        } else {
            (r.src.min(r.dst), r.src.max(r.dst))
        };
        if seen.insert(key) {
            edges.push((r.src, r.dst, r.weight));
        }
    }
    Ok(from_homogeneous_weighted(n, &edges, directed)?)
}
