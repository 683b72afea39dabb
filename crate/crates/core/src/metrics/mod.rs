//! Scope-filtered structural measures.
//!
//! Every measure takes a [`MetricScope`]: a set of layers and a set of node
//! types. Only layered nodes whose layer and type are both in the scope take
//! part, except where noted (path endpoints and the node being measured are
//! always admissible).

mod paths;
mod summary;

use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{GraphError, Hmn, LayerId, LayeredNode, NodeTypeId};

pub use paths::{
    betweenness_all, betweenness_centrality, closeness_all, closeness_centrality,
    shortest_distance, Distance,
};
pub use summary::{
    network_summary, per_layer_report, project, scope_averages, CentralityAverages, LayerRow,
    NetworkSummary, PerLayerReport, SimpleGraph,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("the scope selects no layered nodes")]
    EmptyScope,
    #[error("scope must name at least one layer and one node type")]
    EmptyScopeSelection,
    #[error("degree centrality of {0} is undefined: no other node is in scope")]
    UndefinedDegreeCentrality(LayeredNode),
    #[error("histogram is empty")]
    EmptyHistogram,
}

/// The `(layers, types)` filter applied to every measure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricScope {
    layer_mask: Vec<bool>,
    type_mask: Vec<bool>,
}

impl MetricScope {
    /// All layers and all node types of `g`.
    pub fn full(g: &Hmn) -> Self {
        Self {
            layer_mask: vec![true; g.layer_count()],
            type_mask: vec![true; g.node_type_count()],
        }
    }

    pub fn new(g: &Hmn, layers: &[LayerId], types: &[NodeTypeId]) -> Result<Self, MetricError> {
        if layers.is_empty() || types.is_empty() {
            return Err(MetricError::EmptyScopeSelection);
        }
        let mut layer_mask = vec![false; g.layer_count()];
        for &l in layers {
            *layer_mask
                .get_mut(l.index())
                .ok_or(GraphError::UnknownLayer(l))? = true;
        }
        let mut type_mask = vec![false; g.node_type_count()];
        for &t in types {
            *type_mask
                .get_mut(t.index())
                .ok_or(GraphError::UnknownNodeType(t))? = true;
        }
        Ok(Self {
            layer_mask,
            type_mask,
        })
    }

    /// Only the given layers, every node type.
    pub fn layers_only(g: &Hmn, layers: &[LayerId]) -> Result<Self, MetricError> {
        let types: Vec<NodeTypeId> = g.node_type_ids().collect();
        Self::new(g, layers, &types)
    }

    pub fn layers(&self) -> Vec<LayerId> {
        mask_ids(&self.layer_mask).map(LayerId).collect()
    }

    pub fn types(&self) -> Vec<NodeTypeId> {
        mask_ids(&self.type_mask).map(NodeTypeId).collect()
    }

    pub fn has_layer(&self, l: LayerId) -> bool {
        self.layer_mask.get(l.index()).copied().unwrap_or(false)
    }

    pub fn has_type(&self, t: NodeTypeId) -> bool {
        self.type_mask.get(t.index()).copied().unwrap_or(false)
    }

    pub fn admits(&self, g: &Hmn, v: LayeredNode) -> bool {
        self.has_layer(v.layer) && g.r_vt(v.node).map(|t| self.has_type(t)).unwrap_or(false)
    }

    /// True when `self` selects a subset of what `other` selects.
    pub fn is_subset_of(&self, other: &MetricScope) -> bool {
        let sub = |a: &[bool], b: &[bool]| {
            a.iter()
                .enumerate()
                .all(|(i, &x)| !x || b.get(i).copied().unwrap_or(false))
        };
        sub(&self.layer_mask, &other.layer_mask) && sub(&self.type_mask, &other.type_mask)
    }

    pub(crate) fn admits_slot(&self, g: &Hmn, slot: usize) -> bool {
        self.has_layer(g.slot_node(slot).layer) && self.has_type(g.slot_type(slot))
    }

    /// Mask over vertex slots.
    pub(crate) fn slot_mask(&self, g: &Hmn) -> Vec<bool> {
        (0..g.layered_node_count())
            .map(|s| self.admits_slot(g, s))
            .collect()
    }

    /// Number of layered nodes in scope, counted through the type-layer index.
    pub fn scoped_count(&self, g: &Hmn) -> usize {
        let mut total = 0;
        for t in mask_ids(&self.type_mask) {
            for l in mask_ids(&self.layer_mask) {
                total += g
                    .r_tl(NodeTypeId(t), LayerId(l))
                    .map(<[_]>::len)
                    .unwrap_or(0);
            }
        }
        total
    }
}

fn mask_ids(mask: &[bool]) -> impl Iterator<Item = u32> + '_ {
    mask.iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(i, _)| i as u32)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Direction {
    In,
    Out,
    Both,
}

/// Scoped neighbour slots of `slot`, sorted and deduplicated.
pub(crate) fn neighbor_slots(
    g: &Hmn,
    slot: usize,
    scope: &MetricScope,
    dir: Direction,
) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::new();
    let mut push_from = |adj: &[crate::graph::Adj]| {
        out.extend(
            adj.iter()
                .map(|a| a.slot as usize)
                .filter(|&s| scope.admits_slot(g, s)),
        );
    };
    match dir {
        Direction::Out => push_from(g.out_adj_slot(slot)),
        Direction::In => push_from(g.in_adj_slot(slot)),
        Direction::Both => {
            push_from(g.out_adj_slot(slot));
            if g.is_directed() {
                push_from(g.in_adj_slot(slot));
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

fn to_set(g: &Hmn, slots: Vec<usize>) -> BTreeSet<LayeredNode> {
    slots.into_iter().map(|s| g.slot_node(s)).collect()
}

/// In-neighbourhood: `{u^k : (u^k, v^l) in E, k in layers, type(u) in types}`.
pub fn neighborhood_in(
    g: &Hmn,
    v: LayeredNode,
    scope: &MetricScope,
) -> Result<BTreeSet<LayeredNode>, MetricError> {
    let slot = g.slot_of(v)?;
    Ok(to_set(g, neighbor_slots(g, slot, scope, Direction::In)))
}

/// Out-neighbourhood: `{u^k : (v^l, u^k) in E, k in layers, type(u) in types}`.
pub fn neighborhood_out(
    g: &Hmn,
    v: LayeredNode,
    scope: &MetricScope,
) -> Result<BTreeSet<LayeredNode>, MetricError> {
    let slot = g.slot_of(v)?;
    Ok(to_set(g, neighbor_slots(g, slot, scope, Direction::Out)))
}

/// Union of the in- and out-neighbourhoods. Copies of `v.node` in other
/// layers are only included if an explicit edge connects them to `v`.
pub fn neighborhood(
    g: &Hmn,
    v: LayeredNode,
    scope: &MetricScope,
) -> Result<BTreeSet<LayeredNode>, MetricError> {
    let slot = g.slot_of(v)?;
    Ok(to_set(g, neighbor_slots(g, slot, scope, Direction::Both)))
}

/// Scoped degree centrality: neighbours in scope over the number of other
/// layered nodes in scope. A node present in two scoped layers counts twice
/// in the denominator.
pub fn degree_centrality(
    g: &Hmn,
    v: LayeredNode,
    scope: &MetricScope,
) -> Result<f64, MetricError> {
    let slot = g.slot_of(v)?;
    let neighbors = neighbor_slots(g, slot, scope, Direction::Both).len();
    let mut denom = scope.scoped_count(g);
    if scope.admits_slot(g, slot) {
        denom -= 1;
    }
    if denom == 0 {
        return Err(MetricError::UndefinedDegreeCentrality(v));
    }
    Ok(neighbors as f64 / denom as f64)
}

/// Local clustering: `2 T / (k (k - 1))` with `k` the scoped neighbourhood
/// size and `T` the number of adjacent neighbour pairs. Zero when `k < 2`.
pub fn clustering_coefficient(
    g: &Hmn,
    v: LayeredNode,
    scope: &MetricScope,
) -> Result<f64, MetricError> {
    let slot = g.slot_of(v)?;
    Ok(clustering_slot(g, slot, scope))
}

pub(crate) fn clustering_slot(g: &Hmn, slot: usize, scope: &MetricScope) -> f64 {
    let nbrs = neighbor_slots(g, slot, scope, Direction::Both);
    let k = nbrs.len();
    if k < 2 {
        return 0.0;
    }
    let members: HashSet<usize> = nbrs.iter().copied().collect();
    let mut links = 0usize;
    for &x in &nbrs {
        let mut seen: Vec<usize> = g
            .out_adj_slot(x)
            .iter()
            .chain(if g.is_directed() {
                g.in_adj_slot(x)
            } else {
                &[]
            })
            .map(|a| a.slot as usize)
            .filter(|&y| y > x && members.contains(&y))
            .collect();
        seen.sort_unstable();
        seen.dedup();
        links += seen.len();
    }
    2.0 * links as f64 / (k * (k - 1)) as f64
}

/// Which incident edges a degree histogram counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DegreeSplit {
    Intra,
    Inter,
    All,
}

impl std::str::FromStr for DegreeSplit {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "intra" => Ok(Self::Intra),
            "inter" => Ok(Self::Inter),
            "all" => Ok(Self::All),
            other => Err(format!("unknown split {other:?} (expected intra, inter or all)")),
        }
    }
}

/// Degree value -> number of scoped layered nodes with that degree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreeHistogram {
    pub counts: BTreeMap<usize, usize>,
    pub layers: Vec<u32>,
    pub types: Vec<u32>,
    pub split: DegreeSplit,
}

impl DegreeHistogram {
    /// A histogram read back from a table, without scope information.
    pub fn from_counts(counts: BTreeMap<usize, usize>) -> Self {
        Self {
            counts,
            layers: Vec::new(),
            types: Vec::new(),
            split: DegreeSplit::All,
        }
    }

    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.total() == 0
    }

    /// Sum of `degree * count`.
    pub fn degree_sum(&self) -> usize {
        self.counts.iter().map(|(d, c)| d * c).sum()
    }

    /// Fraction of nodes with degree `<= d`.
    pub fn cdf(&self, d: usize) -> f64 {
        let total = self.total();
        if total == 0 {
            return 0.0;
        }
        let below: usize = self.counts.range(..=d).map(|(_, c)| c).sum();
        below as f64 / total as f64
    }
}

/// Degree histogram over scoped layered nodes. An incident edge is counted
/// when its other endpoint is in scope and it matches `split`.
pub fn degree_distribution(
    g: &Hmn,
    scope: &MetricScope,
    split: DegreeSplit,
) -> Result<DegreeHistogram, MetricError> {
    let degrees = scoped_degrees(g, scope, split);
    if degrees.is_empty() {
        return Err(MetricError::EmptyScope);
    }
    let mut counts = BTreeMap::new();
    for (_, d) in degrees {
        *counts.entry(d).or_insert(0) += 1;
    }
    Ok(DegreeHistogram {
        counts,
        layers: scope.layers().into_iter().map(|l| l.0).collect(),
        types: scope.types().into_iter().map(|t| t.0).collect(),
        split,
    })
}

/// Per scoped layered node, the number of incident edges that match `split`
/// and whose other endpoint is in scope.
pub fn scoped_degrees(g: &Hmn, scope: &MetricScope, split: DegreeSplit) -> Vec<(LayeredNode, usize)> {
    let mask = scope.slot_mask(g);
    let keep = |e: &crate::graph::Edge| match split {
        DegreeSplit::All => true,
        DegreeSplit::Intra => e.is_intra(),
        DegreeSplit::Inter => e.is_inter(),
    };
    let mut out = Vec::new();
    for slot in 0..g.layered_node_count() {
        if !mask[slot] {
            continue;
        }
        let count_side = |adj: &[crate::graph::Adj]| {
            adj.iter()
                .filter(|a| mask[a.slot as usize] && keep(g.edge_at(a.edge)))
                .count()
        };
        let mut d = count_side(g.out_adj_slot(slot));
        if g.is_directed() {
            d += count_side(g.in_adj_slot(slot));
        }
        out.push((g.slot_node(slot), d));
    }
    out
}

/// Kolmogorov-Smirnov distance: the largest gap between the two empirical
/// degree CDFs.
pub fn ks_distance(a: &DegreeHistogram, b: &DegreeHistogram) -> Result<f64, MetricError> {
    if a.is_empty() || b.is_empty() {
        return Err(MetricError::EmptyHistogram);
    }
    let (ta, tb) = (a.total() as f64, b.total() as f64);
    let support: BTreeSet<usize> = a.counts.keys().chain(b.counts.keys()).copied().collect();
    let (mut ca, mut cb) = (0usize, 0usize);
    let mut worst = 0.0f64;
    for d in support {
        ca += a.counts.get(&d).copied().unwrap_or(0);
        cb += b.counts.get(&d).copied().unwrap_or(0);
        worst = worst.max((ca as f64 / ta - cb as f64 / tb).abs());
    }
    Ok(worst)
}

/// Counts entries inspected by the typed-neighbour queries.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct QueryCounter {
    pub inspected: usize,
}

/// Neighbours of `x` whose type is in `types` and whose layer is in
/// `layers`, retrieved through the type-layer index: the candidate set is the
/// union of `R_TL(t, l)` and the neighbourhood is filtered against it.
pub fn typed_neighbors_indexed(
    g: &Hmn,
    x: LayeredNode,
    types: &[NodeTypeId],
    layers: &[LayerId],
    counter: &mut QueryCounter,
) -> Result<BTreeSet<LayeredNode>, MetricError> {
    let slot = g.slot_of(x)?;
    let mut candidates: HashSet<LayeredNode> = HashSet::new();
    for &t in types {
        for &l in layers {
            let nodes = g.r_tl(t, l)?;
            counter.inspected += nodes.len();
            candidates.extend(nodes.iter().map(|&n| LayeredNode::new(n, l)));
        }
    }
    let mut out = BTreeSet::new();
    let mut visit = |adj: &[crate::graph::Adj]| {
        for a in adj {
            counter.inspected += 1;
            let other = g.slot_node(a.slot as usize);
            if candidates.contains(&other) {
                out.insert(other);
            }
        }
    };
    visit(g.out_adj_slot(slot));
    if g.is_directed() {
        visit(g.in_adj_slot(slot));
    }
    Ok(out)
}

/// The same query answered by scanning every layered node and testing type,
/// layer and adjacency directly.
pub fn typed_neighbors_scan(
    g: &Hmn,
    x: LayeredNode,
    types: &[NodeTypeId],
    layers: &[LayerId],
    counter: &mut QueryCounter,
) -> Result<BTreeSet<LayeredNode>, MetricError> {
    let slot = g.slot_of(x)?;
    let adjacent: HashSet<usize> = g
        .out_adj_slot(slot)
        .iter()
        .chain(if g.is_directed() {
            g.in_adj_slot(slot)
        } else {
            &[]
        })
        .map(|a| a.slot as usize)
        .collect();
    let mut out = BTreeSet::new();
    for s in 0..g.layered_node_count() {
        counter.inspected += 1;
        let u = g.slot_node(s);
        if types.contains(&g.slot_type(s)) && layers.contains(&u.layer) && adjacent.contains(&s) {
            out.insert(u);
        }
    }
    Ok(out)
}

/// Jaccard score `|N(x) ∩ N(y)| / |N(x) ∪ N(y)|` with scoped neighbourhoods
/// retrieved through the type-layer index. Zero when both are empty.
pub fn jaccard_score(
    g: &Hmn,
    x: LayeredNode,
    y: LayeredNode,
    scope: &MetricScope,
) -> Result<f64, MetricError> {
    let types = scope.types();
    let layers = scope.layers();
    let mut counter = QueryCounter::default();
    let nx = typed_neighbors_indexed(g, x, &types, &layers, &mut counter)?;
    let ny = typed_neighbors_indexed(g, y, &types, &layers, &mut counter)?;
    let union = nx.union(&ny).count();
    if union == 0 {
        return Ok(0.0);
    }
    Ok(nx.intersection(&ny).count() as f64 / union as f64)
}
