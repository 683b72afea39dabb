//! Shortest paths, betweenness and closeness under a scope.
//!
//! Paths may only pass through scoped layered nodes. Path endpoints are always
//! admissible, and so is the node whose centrality is being measured. Paths
//! are sequences of layered nodes: parallel edges of different types between
//! the same pair do not multiply the path count.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};
use std::fmt;

use rayon::prelude::*;

use super::{MetricError, MetricScope};
use crate::graph::{Hmn, LayeredNode};

/// A path length; infinite when no admissible path exists.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Distance(pub f64);

impl Distance {
    pub const INFINITE: Distance = Distance(f64::INFINITY);

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_finite() {
            write!(f, "{}", self.0)
        } else {
            f.write_str("inf")
        }
    }
}

const SOURCE_CHUNK: usize = 32;

#[derive(Clone, Copy, PartialEq)]
struct HeapItem {
    dist: f64,
    slot: u32,
}

impl Eq for HeapItem {}

impl Ord for HeapItem {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.slot.cmp(&self.slot))
    }
}

impl PartialOrd for HeapItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Reusable single-source shortest-path state. Only touched entries are reset
/// between runs.
struct Workspace {
    dist: Vec<f64>,
    sigma: Vec<f64>,
    delta: Vec<f64>,
    settled: Vec<bool>,
    preds: Vec<Vec<u32>>,
    order: Vec<u32>,
    touched: Vec<u32>,
    queue: VecDeque<u32>,
    heap: BinaryHeap<HeapItem>,
}

impl Workspace {
    fn new(n: usize) -> Self {
        Self {
            dist: vec![f64::INFINITY; n],
            sigma: vec![0.0; n],
            delta: vec![0.0; n],
            settled: vec![false; n],
            preds: vec![Vec::new(); n],
            order: Vec::new(),
            touched: Vec::new(),
            queue: VecDeque::new(),
            heap: BinaryHeap::new(),
        }
    }

    fn reset(&mut self) {
        for &t in &self.touched {
            let t = t as usize;
            self.dist[t] = f64::INFINITY;
            self.sigma[t] = 0.0;
            self.delta[t] = 0.0;
            self.settled[t] = false;
            self.preds[t].clear();
        }
        self.touched.clear();
        self.order.clear();
        self.queue.clear();
        self.heap.clear();
    }

    /// Runs a search from `src`. `enter(s)` decides whether `s` may be
    /// reached; `expand(s)` whether edges may be followed out of `s` (the
    /// source is always expanded). `order` receives settled nodes in
    /// non-decreasing distance.
    fn run(
        &mut self,
        g: &Hmn,
        src: usize,
        enter: &dyn Fn(usize) -> bool,
        expand: &dyn Fn(usize) -> bool,
    ) {
        self.reset();
        self.dist[src] = 0.0;
        self.sigma[src] = 1.0;
        self.touched.push(src as u32);
        if g.has_unit_weights() {
            self.queue.push_back(src as u32);
            while let Some(u) = self.queue.pop_front() {
                let u = u as usize;
                self.order.push(u as u32);
                if u != src && !expand(u) {
                    continue;
                }
                let next = self.dist[u] + 1.0;
                for a in g.out_adj_slot(u) {
                    let w = a.slot as usize;
                    if !enter(w) {
                        continue;
                    }
                    if self.dist[w].is_infinite() {
                        self.dist[w] = next;
                        self.touched.push(w as u32);
                        self.queue.push_back(w as u32);
                    }
                    if self.dist[w] == next && self.preds[w].last() != Some(&(u as u32)) {
                        self.sigma[w] += self.sigma[u];
                        self.preds[w].push(u as u32);
                    }
                }
            }
        } else {
            self.heap.push(HeapItem {
                dist: 0.0,
                slot: src as u32,
            });
            while let Some(HeapItem { dist, slot }) = self.heap.pop() {
                let u = slot as usize;
                if self.settled[u] || dist > self.dist[u] {
                    continue;
                }
                self.settled[u] = true;
                self.order.push(slot);
                if u != src && !expand(u) {
                    continue;
                }
                for a in g.out_adj_slot(u) {
                    let w = a.slot as usize;
                    if !enter(w) || self.settled[w] {
                        continue;
                    }
                    let nd = dist + g.edge_at(a.edge).weight;
                    if self.dist[w].is_infinite() {
                        self.touched.push(w as u32);
                    }
                    if nd < self.dist[w] {
                        self.dist[w] = nd;
                        self.sigma[w] = self.sigma[u];
                        self.preds[w].clear();
                        self.preds[w].push(u as u32);
                        self.heap.push(HeapItem {
                            dist: nd,
                            slot: w as u32,
                        });
                    } else if nd == self.dist[w] && self.preds[w].last() != Some(&(u as u32)) {
                        self.sigma[w] += self.sigma[u];
                        self.preds[w].push(u as u32);
                    }
                }
            }
        }
    }

    /// Dependency accumulation after `run`; adds each settled node's
    /// dependency on `src` into `acc`. `is_target(t)` says whether paths
    /// ending at `t` are counted.
    fn accumulate(&mut self, src: usize, is_target: &dyn Fn(usize) -> bool, acc: &mut [f64]) {
        for i in (0..self.order.len()).rev() {
            let t = self.order[i] as usize;
            let own = if t != src && is_target(t) { 1.0 } else { 0.0 };
            let coeff = (own + self.delta[t]) / self.sigma[t];
            for &p in &self.preds[t] {
                let p = p as usize;
                self.delta[p] += self.sigma[p] * coeff;
            }
            if t != src {
                acc[t] += self.delta[t];
            }
        }
    }
}

/// Minimum total weight of a path from `src` to `dst` whose intermediate
/// nodes are all in scope. Unit-weight graphs give hop counts.
pub fn shortest_distance(
    g: &Hmn,
    src: LayeredNode,
    dst: LayeredNode,
    scope: &MetricScope,
) -> Result<Distance, MetricError> {
    let s = g.slot_of(src)?;
    let t = g.slot_of(dst)?;
    let mask = scope.slot_mask(g);
    let mut ws = Workspace::new(g.layered_node_count());
    ws.run(g, s, &|_| true, &|u| mask[u]);
    Ok(Distance(ws.dist[t]))
}

/// Betweenness of `v`: over pairs of scoped layered nodes other than `v`, the
/// fraction of shortest paths that pass through `v`. Unordered pairs on
/// undirected graphs, ordered pairs on directed graphs.
pub fn betweenness_centrality(
    g: &Hmn,
    v: LayeredNode,
    scope: &MetricScope,
) -> Result<f64, MetricError> {
    let vs = g.slot_of(v)?;
    let mut mask = scope.slot_mask(g);
    mask[vs] = true;
    let sources: Vec<usize> = (0..mask.len()).filter(|&s| mask[s] && s != vs).collect();
    let acc = brandes(g, &mask, &sources, Some(vs));
    let raw = acc[vs];
    Ok(if g.is_directed() { raw } else { raw / 2.0 })
}

/// Betweenness of every scoped layered node, in one pass of single-source
/// accumulations. Sources are processed in parallel chunks and the chunk
/// results are summed in a fixed order, so the output does not depend on the
/// thread count.
pub fn betweenness_all(g: &Hmn, scope: &MetricScope) -> Vec<(LayeredNode, f64)> {
    let mask = scope.slot_mask(g);
    let sources: Vec<usize> = (0..mask.len()).filter(|&s| mask[s]).collect();
    let acc = brandes(g, &mask, &sources, None);
    let half = if g.is_directed() { 1.0 } else { 0.5 };
    sources
        .iter()
        .map(|&s| (g.slot_node(s), acc[s] * half))
        .collect()
}

fn brandes(g: &Hmn, mask: &[bool], sources: &[usize], excluded: Option<usize>) -> Vec<f64> {
    let n = g.layered_node_count();
    let partials: Vec<Vec<f64>> = sources
        .par_chunks(SOURCE_CHUNK)
        .map(|chunk| {
            let mut ws = Workspace::new(n);
            let mut acc = vec![0.0; n];
            for &s in chunk {
                ws.run(g, s, &|w| mask[w], &|_| true);
                ws.accumulate(s, &|t| Some(t) != excluded, &mut acc);
            }
            acc
        })
        .collect();
    let mut total = vec![0.0; n];
    for part in partials {
        for (t, p) in total.iter_mut().zip(part) {
            *t += p;
        }
    }
    total
}

/// Closeness of `v`: the sum of `1 / d(v, u)` over scoped layered nodes
/// `u != v`, with unreachable nodes contributing zero.
pub fn closeness_centrality(
    g: &Hmn,
    v: LayeredNode,
    scope: &MetricScope,
) -> Result<f64, MetricError> {
    let vs = g.slot_of(v)?;
    let mut mask = scope.slot_mask(g);
    let targets = mask.clone();
    mask[vs] = true;
    let mut ws = Workspace::new(g.layered_node_count());
    Ok(closeness_from(&mut ws, g, vs, &mask, &targets))
}

/// Closeness of every scoped layered node.
pub fn closeness_all(g: &Hmn, scope: &MetricScope) -> Vec<(LayeredNode, f64)> {
    let mask = scope.slot_mask(g);
    let sources: Vec<usize> = (0..mask.len()).filter(|&s| mask[s]).collect();
    let n = g.layered_node_count();
    sources
        .par_chunks(SOURCE_CHUNK)
        .map(|chunk| {
            let mut ws = Workspace::new(n);
            chunk
                .iter()
                .map(|&s| (g.slot_node(s), closeness_from(&mut ws, g, s, &mask, &mask)))
                .collect::<Vec<_>>()
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

fn closeness_from(ws: &mut Workspace, g: &Hmn, src: usize, mask: &[bool], targets: &[bool]) -> f64 {
    ws.run(g, src, &|w| mask[w], &|_| true);
    let mut total = 0.0;
    for &t in &ws.order {
        let t = t as usize;
        if t != src && targets[t] {
            total += 1.0 / ws.dist[t];
        }
    }
    total
}
