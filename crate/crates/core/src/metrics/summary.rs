//! Whole-network statistics over the scoped sub-network.

use serde::{Deserialize, Serialize};

use super::paths::{betweenness_all, closeness_all};
use super::{clustering_slot, neighbor_slots, Direction, MetricError, MetricScope};
use crate::graph::{Hmn, LayerId, LayeredNode, NodeTypeId};

/// Simple undirected projection of the scoped sub-network: one vertex per
/// scoped layered node, one edge per adjacent pair regardless of direction,
/// type or multiplicity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleGraph {
    pub nodes: Vec<LayeredNode>,
    /// Sorted neighbour indices.
    pub adj: Vec<Vec<u32>>,
}

pub fn project(g: &Hmn, scope: &MetricScope) -> SimpleGraph {
    let mask = scope.slot_mask(g);
    let mut index = vec![u32::MAX; mask.len()];
    let mut nodes = Vec::new();
    for (slot, &m) in mask.iter().enumerate() {
        if m {
            index[slot] = nodes.len() as u32;
            nodes.push(g.slot_node(slot));
        }
    }
    let mut adj: Vec<Vec<u32>> = vec![Vec::new(); nodes.len()];
    for e in g.edges() {
        let (Ok(a), Ok(b)) = (g.slot_of(e.src), g.slot_of(e.dst)) else {
            continue;
        };
        if mask[a] && mask[b] {
            let (ia, ib) = (index[a], index[b]);
            adj[ia as usize].push(ib);
            adj[ib as usize].push(ia);
        }
    }
    for list in &mut adj {
        list.sort_unstable();
        list.dedup();
    }
    SimpleGraph { nodes, adj }
}

impl SimpleGraph {
    pub fn from_edges(n: usize, edges: &[(u32, u32)]) -> Self {
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in edges {
            if a != b {
                adj[a as usize].push(b);
                adj[b as usize].push(a);
            }
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        let nodes = (0..n as u32)
            .map(|i| LayeredNode::new(crate::graph::NodeId(i), LayerId(0)))
            .collect();
        Self { nodes, adj }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a].binary_search(&(b as u32)).is_ok()
    }

    /// Removes vertices with no neighbours.
    pub fn without_isolated(&self) -> SimpleGraph {
        let mut index = vec![u32::MAX; self.nodes.len()];
        let mut nodes = Vec::new();
        for (i, list) in self.adj.iter().enumerate() {
            if !list.is_empty() {
                index[i] = nodes.len() as u32;
                nodes.push(self.nodes[i]);
            }
        }
        let adj = self
            .adj
            .iter()
            .filter(|l| !l.is_empty())
            .map(|l| l.iter().map(|&w| index[w as usize]).collect())
            .collect();
        SimpleGraph { nodes, adj }
    }

    /// Number of triangles each vertex belongs to.
    pub fn triangles_per_node(&self) -> Vec<u64> {
        let mut per = vec![0u64; self.nodes.len()];
        for u in 0..self.nodes.len() {
            for &v in self.adj[u].iter().filter(|&&v| v as usize > u) {
                let v = v as usize;
                // common neighbours w > v
                let (mut i, mut j) = (0, 0);
                let (a, b) = (&self.adj[u], &self.adj[v]);
                while i < a.len() && j < b.len() {
                    match a[i].cmp(&b[j]) {
                        std::cmp::Ordering::Less => i += 1,
                        std::cmp::Ordering::Greater => j += 1,
                        std::cmp::Ordering::Equal => {
                            let w = a[i] as usize;
                            if w > v {
                                per[u] += 1;
                                per[v] += 1;
                                per[w] += 1;
                            }
                            i += 1;
                            j += 1;
                        }
                    }
                }
            }
        }
        per
    }

    pub fn local_clustering(&self, v: usize, triangles: u64) -> f64 {
        let k = self.degree(v);
        if k < 2 {
            0.0
        } else {
            2.0 * triangles as f64 / (k * (k - 1)) as f64
        }
    }

    /// Degree assortativity: Pearson correlation of the degrees at either end
    /// of each edge, taken in both orientations. `None` when there are no
    /// edges or the degree variance over edge ends is zero.
    pub fn assortativity(&self) -> Option<f64> {
        let m = self.edge_count();
        if m == 0 {
            return None;
        }
        let (mut sum_prod, mut sum_half, mut sum_sq_half) = (0.0f64, 0.0f64, 0.0f64);
        for u in 0..self.nodes.len() {
            for &v in self.adj[u].iter().filter(|&&v| v as usize > u) {
                let (j, k) = (self.degree(u) as f64, self.degree(v as usize) as f64);
                sum_prod += j * k;
                sum_half += 0.5 * (j + k);
                sum_sq_half += 0.5 * (j * j + k * k);
            }
        }
        let m = m as f64;
        let mean = sum_half / m;
        let denom = sum_sq_half / m - mean * mean;
        if denom.abs() <= 1e-12 * (sum_sq_half / m).max(1.0) {
            return None;
        }
        Some((sum_prod / m - mean * mean) / denom)
    }

    /// Size of the largest clique, by branch and bound with a greedy
    /// colouring bound. Each vertex seeds a search over its neighbours that
    /// come later in a degeneracy order.
    pub fn clique_number(&self) -> usize {
        let n = self.nodes.len();
        if n == 0 {
            return 0;
        }
        let order = self.degeneracy_order();
        let mut pos = vec![0usize; n];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        let mut search = CliqueSearch {
            graph: self,
            best: 1,
        };
        for &v in &order {
            let cand: Vec<usize> = self.adj[v]
                .iter()
                .map(|&w| w as usize)
                .filter(|&w| pos[w] > pos[v])
                .collect();
            if cand.len() + 1 > search.best {
                search.expand(1, cand);
            }
        }
        search.best
    }

    fn degeneracy_order(&self) -> Vec<usize> {
        let n = self.nodes.len();
        let mut degree: Vec<usize> = (0..n).map(|v| self.degree(v)).collect();
        let max_deg = degree.iter().copied().max().unwrap_or(0);
        let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); max_deg + 1];
        for v in 0..n {
            buckets[degree[v]].push(v);
        }
        let mut removed = vec![false; n];
        let mut order = Vec::with_capacity(n);
        let mut d = 0;
        while order.len() < n {
            d = d.min(max_deg);
            while buckets[d].is_empty() {
                d += 1;
            }
            let v = buckets[d].pop().expect("non-empty bucket");
            if removed[v] || degree[v] != d {
                continue;
            }
            removed[v] = true;
            order.push(v);
            for &w in &self.adj[v] {
                let w = w as usize;
                if !removed[w] {
                    degree[w] -= 1;
                    buckets[degree[w]].push(w);
                }
            }
            d = d.saturating_sub(1);
        }
        order
    }
}

struct CliqueSearch<'a> {
    graph: &'a SimpleGraph,
    best: usize,
}

impl CliqueSearch<'_> {
    fn expand(&mut self, size: usize, cand: Vec<usize>) {
        if cand.is_empty() {
            self.best = self.best.max(size);
            return;
        }
        let (order, colors) = self.color_sort(&cand);
        for i in (0..order.len()).rev() {
            if size + colors[i] <= self.best {
                return;
            }
            let v = order[i];
            let next: Vec<usize> = order[..i]
                .iter()
                .copied()
                .filter(|&w| self.graph.has_edge(v, w))
                .collect();
            self.expand(size + 1, next);
        }
    }

    /// Greedy colouring; returns vertices sorted by colour and the colour
    /// number (1-based) of each.
    fn color_sort(&self, cand: &[usize]) -> (Vec<usize>, Vec<usize>) {
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for &v in cand {
            let slot = classes
                .iter()
                .position(|class| class.iter().all(|&w| !self.graph.has_edge(v, w)));
            match slot {
                Some(c) => classes[c].push(v),
                None => classes.push(vec![v]),
            }
        }
        let mut order = Vec::with_capacity(cand.len());
        let mut colors = Vec::with_capacity(cand.len());
        for (c, class) in classes.into_iter().enumerate() {
            for v in class {
                order.push(v);
                colors.push(c + 1);
            }
        }
        (order, colors)
    }
}

/// Summary statistics of a network.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkSummary {
    pub nodes: usize,
    pub edges: usize,
    pub density: f64,
    pub avg_degree: f64,
    /// `None` when undefined (no edges, or all edge ends share one degree).
    pub assortativity: Option<f64>,
    pub triangles: u64,
    pub avg_triangles_per_node: f64,
    pub avg_clustering: f64,
    pub clique_number: usize,
}

impl NetworkSummary {
    pub fn of(graph: &SimpleGraph) -> Self {
        let n = graph.node_count();
        let m = graph.edge_count();
        let per = graph.triangles_per_node();
        let triangle_sum: u64 = per.iter().sum();
        let clustering_sum: f64 = (0..n).map(|v| graph.local_clustering(v, per[v])).sum();
        let nf = n.max(1) as f64;
        Self {
            nodes: n,
            edges: m,
            density: if n < 2 {
                0.0
            } else {
                2.0 * m as f64 / (n * (n - 1)) as f64
            },
            avg_degree: 2.0 * m as f64 / nf,
            assortativity: graph.assortativity(),
            triangles: triangle_sum / 3,
            avg_triangles_per_node: triangle_sum as f64 / nf,
            avg_clustering: clustering_sum / nf,
            clique_number: graph.clique_number(),
        }
    }
}

/// Summary of the scoped sub-network (as a simple undirected graph).
pub fn network_summary(g: &Hmn, scope: &MetricScope) -> Result<NetworkSummary, MetricError> {
    let graph = project(g, scope);
    if graph.node_count() == 0 {
        return Err(MetricError::EmptyScope);
    }
    Ok(NetworkSummary::of(&graph))
}

/// Node-averaged centralities over a scope.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CentralityAverages {
    /// Number of layered nodes averaged over.
    pub nodes: usize,
    pub degree: f64,
    pub betweenness: f64,
    pub closeness: f64,
    pub clustering: f64,
}

/// Averages degree, betweenness, closeness and clustering over the scoped
/// layered nodes. With `drop_isolated`, nodes without a scoped neighbour are
/// left out of the averages and of the degree-centrality denominator.
pub fn scope_averages(
    g: &Hmn,
    scope: &MetricScope,
    drop_isolated: bool,
) -> Result<CentralityAverages, MetricError> {
    let mask = scope.slot_mask(g);
    let mut active = Vec::new();
    let mut neighbor_counts = Vec::new();
    for (slot, &m) in mask.iter().enumerate() {
        if !m {
            continue;
        }
        let k = neighbor_slots(g, slot, scope, Direction::Both).len();
        if drop_isolated && k == 0 {
            continue;
        }
        active.push(slot);
        neighbor_counts.push(k);
    }
    if active.is_empty() {
        return Err(MetricError::EmptyScope);
    }
    let count = active.len();
    let mut keep = vec![false; mask.len()];
    for &s in &active {
        keep[s] = true;
    }
    let between: f64 = betweenness_all(g, scope)
        .into_iter()
        .filter(|(v, _)| g.slot_of(*v).map(|s| keep[s]).unwrap_or(false))
        .map(|(_, b)| b)
        .sum();
    let close: f64 = closeness_all(g, scope)
        .into_iter()
        .filter(|(v, _)| g.slot_of(*v).map(|s| keep[s]).unwrap_or(false))
        .map(|(_, c)| c)
        .sum();
    let clustering: f64 = active.iter().map(|&s| clustering_slot(g, s, scope)).sum();
    let degree: f64 = if count < 2 {
        0.0
    } else {
        neighbor_counts.iter().sum::<usize>() as f64 / (count - 1) as f64
    };
    let cf = count as f64;
    Ok(CentralityAverages {
        nodes: count,
        degree: degree / cf,
        betweenness: between / cf,
        closeness: close / cf,
        clustering: clustering / cf,
    })
}

/// One layer's statistics, or the mean over layers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayerRow {
    /// `None` for the mean row.
    pub layer: Option<LayerId>,
    pub name: String,
    pub nodes: f64,
    pub edges: f64,
    pub degree: f64,
    pub betweenness: f64,
    pub closeness: f64,
    pub clustering: f64,
    pub triangles: f64,
    pub avg_triangles_per_node: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerLayerReport {
    pub layers: Vec<LayerRow>,
    pub mean: LayerRow,
}

/// Statistics of each layer taken on its own (scope = that layer and
/// `types`), then averaged over the layers that have at least one counted
/// node. With `drop_isolated`, a layer's node set is the nodes that have a
/// neighbour inside it.
pub fn per_layer_report(
    g: &Hmn,
    types: &[NodeTypeId],
    drop_isolated: bool,
) -> Result<PerLayerReport, MetricError> {
    let mut rows = Vec::new();
    for l in g.layer_ids() {
        let scope = MetricScope::new(g, &[l], types)?;
        let mut graph = project(g, &scope);
        if drop_isolated {
            graph = graph.without_isolated();
        }
        if graph.node_count() == 0 {
            continue;
        }
        let averages = scope_averages(g, &scope, drop_isolated)?;
        let summary = NetworkSummary::of(&graph);
        rows.push(LayerRow {
            layer: Some(l),
            name: g.layer_name(l).unwrap_or_default().to_string(),
            nodes: summary.nodes as f64,
            edges: summary.edges as f64,
            degree: averages.degree,
            betweenness: averages.betweenness,
            closeness: averages.closeness,
            clustering: averages.clustering,
            triangles: summary.triangles as f64,
            avg_triangles_per_node: summary.avg_triangles_per_node,
        });
    }
    if rows.is_empty() {
        return Err(MetricError::EmptyScope);
    }
    let k = rows.len() as f64;
    let mean_of = |f: fn(&LayerRow) -> f64| rows.iter().map(f).sum::<f64>() / k;
    let mean = LayerRow {
        layer: None,
        name: "mean".to_string(),
        nodes: mean_of(|r| r.nodes),
        edges: mean_of(|r| r.edges),
        degree: mean_of(|r| r.degree),
        betweenness: mean_of(|r| r.betweenness),
        closeness: mean_of(|r| r.closeness),
        clustering: mean_of(|r| r.clustering),
        triangles: mean_of(|r| r.triangles),
        avg_triangles_per_node: mean_of(|r| r.avg_triangles_per_node),
    };
    Ok(PerLayerReport { layers: rows, mean })
}
