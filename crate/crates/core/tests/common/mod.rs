#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};

use hmn::{EdgeTypeId, Hmn, LayerId, LayeredNode, NodeTypeId};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub struct Shape {
    pub nodes: usize,
    pub layers: usize,
    pub node_types: usize,
    pub edge_types: usize,
    pub p: f64,
    pub directed: bool,
    /// Integer weights drawn from `1..=max_weight`; real weights when 0.
    pub max_weight: u32,
    /// Registry names with tabs, newlines, backslashes and non-ASCII text.
    pub odd_names: bool,
    /// Upper bound on layered nodes; layer sets are trimmed to respect it.
    pub max_layered: usize,
}

/// A random typed multi-layer network: each node gets a type and a random
/// non-empty layer set, and every ordered (or unordered) pair of distinct
/// layered nodes is linked with probability `p` under a random edge type.
pub fn random_hmn(r: &mut impl Rng, s: &Shape) -> Hmn {
    let name = |prefix: &str, i: usize| {
        if s.odd_names {
            format!("{prefix}\t{i}\\ n\n\r é#{i}")
        } else {
            format!("{prefix}{i}")
        }
    };
    let ntypes: Vec<String> = (0..s.node_types).map(|i| name("t", i)).collect();
    let etypes: Vec<String> = (0..s.edge_types).map(|i| name("e", i)).collect();
    let mut g = Hmn::with_types(s.directed, ntypes, etypes).unwrap();
    let layers: Vec<LayerId> = (0..s.layers).map(|i| g.add_layer(&name("L", i)).unwrap()).collect();
    let mut budget = s.max_layered;
    for _ in 0..s.nodes {
        if budget == 0 {
            break;
        }
        let mut set: Vec<LayerId> = layers.iter().copied().filter(|_| r.random_bool(0.5)).collect();
        if set.is_empty() {
            set.push(*layers.choose(r).unwrap());
        }
        set.truncate(budget);
        budget -= set.len();
        let t = NodeTypeId(r.random_range(0..s.node_types) as u32);
        g.add_node(t, &set).unwrap();
    }
    let all: Vec<LayeredNode> = g.layered_nodes().collect();
    for (i, &a) in all.iter().enumerate() {
        for (j, &b) in all.iter().enumerate() {
            if i == j || (!s.directed && j < i) {
                continue;
            }
            if r.random_bool(s.p) {
                let et = EdgeTypeId(r.random_range(0..s.edge_types) as u32);
                let w = if s.max_weight == 0 {
                    r.random_range(1e-3..1e3)
                } else {
                    r.random_range(1..=s.max_weight) as f64
                };
                let _ = g.add_edge(a, b, et, w);
            }
        }
    }
    g
}

/// Undirected G(n, p) edge list.
pub fn gnp_edges(r: &mut impl Rng, n: u32, p: f64) -> Vec<(u32, u32)> {
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if r.random_bool(p) {
                edges.push((a, b));
            }
        }
    }
    edges
}

/// Textbook measures on an undirected simple graph, computed from all-pairs
/// BFS distances and path counts.
pub struct Classic {
    pub n: usize,
    pub adj: Vec<Vec<usize>>,
    pub dist: Vec<Vec<Option<u32>>>,
    pub sigma: Vec<Vec<f64>>,
}

impl Classic {
    pub fn new(n: usize, edges: &[(u32, u32)]) -> Self {
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in edges {
            adj[a as usize].push(b as usize);
            adj[b as usize].push(a as usize);
        }
        let mut dist = vec![vec![None; n]; n];
        let mut sigma = vec![vec![0.0; n]; n];
        for s in 0..n {
            dist[s][s] = Some(0);
            sigma[s][s] = 1.0;
            let mut q = VecDeque::from([s]);
            while let Some(u) = q.pop_front() {
                let du = dist[s][u].unwrap();
                for &w in &adj[u] {
                    match dist[s][w] {
                        None => {
                            dist[s][w] = Some(du + 1);
                            sigma[s][w] = sigma[s][u];
                            q.push_back(w);
                        }
                        Some(dw) if dw == du + 1 => sigma[s][w] += sigma[s][u],
                        _ => {}
                    }
                }
            }
        }
        Self { n, adj, dist, sigma }
    }

    pub fn degree_centrality(&self, v: usize) -> f64 {
        self.adj[v].len() as f64 / (self.n - 1) as f64
    }

    /// Unordered pairs.
    pub fn betweenness(&self, v: usize) -> f64 {
        let mut b = 0.0;
        for s in 0..self.n {
            for t in s + 1..self.n {
                if s == v || t == v {
                    continue;
                }
                if let (Some(st), Some(sv), Some(vt)) = (self.dist[s][t], self.dist[s][v], self.dist[v][t]) {
                    if sv + vt == st {
                        b += self.sigma[s][v] * self.sigma[v][t] / self.sigma[s][t];
                    }
                }
            }
        }
        b
    }

    pub fn closeness(&self, v: usize) -> f64 {
        (0..self.n)
            .filter(|&u| u != v)
            .filter_map(|u| self.dist[v][u])
            .map(|d| 1.0 / d as f64)
            .sum()
    }

    pub fn clustering(&self, v: usize) -> f64 {
        let nb = &self.adj[v];
        let k = nb.len();
        if k < 2 {
            return 0.0;
        }
        let mut links = 0;
        for i in 0..k {
            for j in i + 1..k {
                if self.adj[nb[i]].contains(&nb[j]) {
                    links += 1;
                }
            }
        }
        2.0 * links as f64 / (k * (k - 1)) as f64
    }
}

/// Exhaustive path enumeration over a small network, used as an oracle for
/// scoped betweenness, closeness, clustering and triangle counts.
pub struct Brute<'a> {
    pub g: &'a Hmn,
    pub nodes: Vec<LayeredNode>,
    /// `out[i]`: distinct layered nodes reachable by one edge from `nodes[i]`,
    /// with the lightest parallel edge's weight.
    pub out: Vec<Vec<(usize, f64)>>,
}

impl<'a> Brute<'a> {
    pub fn new(g: &'a Hmn) -> Self {
        let nodes: Vec<LayeredNode> = g.layered_nodes().collect();
        let idx = |v: LayeredNode| nodes.iter().position(|&u| u == v).unwrap();
        let mut out: Vec<Vec<(usize, f64)>> = vec![Vec::new(); nodes.len()];
        let mut link = |a: usize, b: usize, w: f64| match out[a].iter_mut().find(|(x, _)| *x == b) {
            Some(e) => e.1 = e.1.min(w),
            None => out[a].push((b, w)),
        };
        for e in g.edges() {
            let (a, b) = (idx(e.src), idx(e.dst));
            link(a, b, e.weight);
            if !g.is_directed() {
                link(b, a, e.weight);
            }
        }
        Self { g, nodes, out }
    }

    pub fn index(&self, v: LayeredNode) -> usize {
        self.nodes.iter().position(|&u| u == v).unwrap()
    }

    /// Every simple path from `s` to `t` whose interior nodes satisfy
    /// `interior`, as (length, node sequence).
    pub fn paths(&self, s: usize, t: usize, interior: &dyn Fn(usize) -> bool) -> Vec<(f64, Vec<usize>)> {
        let mut found = Vec::new();
        let mut stack = vec![s];
        let mut on = vec![false; self.nodes.len()];
        on[s] = true;
        self.dfs(s, t, 0.0, interior, &mut stack, &mut on, &mut found);
        found
    }

    #[allow(clippy::too_many_arguments)]
    fn dfs(
        &self,
        u: usize,
        t: usize,
        len: f64,
        interior: &dyn Fn(usize) -> bool,
        stack: &mut Vec<usize>,
        on: &mut [bool],
        found: &mut Vec<(f64, Vec<usize>)>,
    ) {
        for &(w, wt) in &self.out[u] {
            if on[w] {
                continue;
            }
            if w == t {
                let mut p = stack.clone();
                p.push(w);
                found.push((len + wt, p));
                continue;
            }
            if !interior(w) {
                continue;
            }
            on[w] = true;
            stack.push(w);
            self.dfs(w, t, len + wt, interior, stack, on, found);
            stack.pop();
            on[w] = false;
        }
    }

    /// Shortest paths among `paths`: (length, count, count through `v`).
    pub fn shortest(paths: &[(f64, Vec<usize>)], v: Option<usize>) -> Option<(f64, f64, f64)> {
        let best = paths.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
        if best.is_infinite() {
            return None;
        }
        let short: Vec<&Vec<usize>> = paths.iter().filter(|p| p.0 == best).map(|p| &p.1).collect();
        let through = short
            .iter()
            .filter(|p| v.is_some_and(|v| p[1..p.len() - 1].contains(&v)))
            .count();
        Some((best, short.len() as f64, through as f64))
    }

    pub fn betweenness(&self, v: usize, scoped: &[bool]) -> f64 {
        let interior = |w: usize| scoped[w] || w == v;
        let n = self.nodes.len();
        let mut total = 0.0;
        for s in 0..n {
            for t in 0..n {
                if s == t || s == v || t == v || !scoped[s] || !scoped[t] {
                    continue;
                }
                if !self.g.is_directed() && t < s {
                    continue;
                }
                if let Some((_, count, through)) = Self::shortest(&self.paths(s, t, &interior), Some(v)) {
                    total += through / count;
                }
            }
        }
        total
    }

    pub fn closeness(&self, v: usize, scoped: &[bool]) -> f64 {
        let interior = |w: usize| scoped[w] || w == v;
        (0..self.nodes.len())
            .filter(|&u| u != v && scoped[u])
            .filter_map(|u| Self::shortest(&self.paths(v, u, &interior), None))
            .map(|(d, _, _)| 1.0 / d)
            .sum()
    }

    /// Undirected scoped neighbourhood of `v`.
    pub fn neighbors(&self, v: usize, scoped: &[bool]) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        for (a, list) in self.out.iter().enumerate() {
            for &(b, _) in list {
                if a == v && scoped[b] {
                    out.insert(b);
                }
                if b == v && scoped[a] {
                    out.insert(a);
                }
            }
        }
        out
    }

    pub fn linked(&self, a: usize, b: usize) -> bool {
        self.out[a].iter().any(|&(x, _)| x == b) || self.out[b].iter().any(|&(x, _)| x == a)
    }

    pub fn clustering(&self, v: usize, scoped: &[bool]) -> f64 {
        let nb: Vec<usize> = self.neighbors(v, scoped).into_iter().collect();
        let k = nb.len();
        if k < 2 {
            return 0.0;
        }
        let mut links = 0;
        for i in 0..k {
            for j in i + 1..k {
                if self.linked(nb[i], nb[j]) {
                    links += 1;
                }
            }
        }
        2.0 * links as f64 / (k * (k - 1)) as f64
    }

    /// Triples of scoped layered nodes that are pairwise linked.
    pub fn triangles(&self, scoped: &[bool]) -> u64 {
        let n = self.nodes.len();
        let mut count = 0;
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    if scoped[a]
                        && scoped[b]
                        && scoped[c]
                        && self.linked(a, b)
                        && self.linked(b, c)
                        && self.linked(a, c)
                    {
                        count += 1;
                    }
                }
            }
        }
        count
    }
}
