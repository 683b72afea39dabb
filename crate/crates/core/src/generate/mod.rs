//! Seeded synthetic HMN generation by degree-plus-neighbour-degree
//! preferential attachment, and classic baseline generators.
//!
//! Nodes arrive one at a time. Each is placed in one layer, given a type
//! allowed in that layer, connected to `m[l][l]` nodes of its own layer and to
//! `m[l][j]` nodes of every other layer `j`. Targets are drawn with weight
//! `floor(alpha * degree + beta * sum of neighbour degrees)`.

mod baseline;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Normal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{EdgeTypeId, GraphError, Hmn, LayerId, LayeredNode, NodeId, NodeTypeId};

pub use baseline::{barabasi_albert, erdos_renyi, gnm, generate_baseline, Baseline};

/// RNG stream for layer draws.
pub const STREAM_LAYER: u64 = 0;
/// RNG stream for type draws.
pub const STREAM_TYPE: u64 = 1;
/// RNG stream for intra-layer targets.
pub const STREAM_INTRA: u64 = 2;
/// RNG stream for sampling the m matrix.
pub const STREAM_M: u64 = 3;
/// Inter-layer targets toward layer `j` use stream `STREAM_INTER_BASE + j`.
pub const STREAM_INTER_BASE: u64 = 16;

/// A ChaCha8 generator on a given stream of `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GenError {
    #[error("at least one layer is required")]
    NoLayers,
    #[error("m matrix must be {expected}x{expected}, got {rows} rows with a row of length {cols}")]
    MatrixShape {
        expected: usize,
        rows: usize,
        cols: usize,
    },
    #[error("types_per_layer lists {got} layers, expected {expected}")]
    TypesShape { expected: usize, got: usize },
    #[error("layer {0} has no node types")]
    EmptyTypes(usize),
    #[error("alpha and beta must be finite and non-negative")]
    InvalidAttachment,
    #[error("alpha + beta is zero; set uniform_attachment to allow uniform targets")]
    ZeroAttachment,
    #[error("invalid layer choice: {0}")]
    LayerChoice(String),
    #[error("invalid type choice: {0}")]
    TypeChoice(String),
    #[error("invalid m specification: {0}")]
    MSpec(String),
    #[error("invalid baseline parameters: {0}")]
    Baseline(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Distribution used to pick a new node's layer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub enum LayerChoice {
    #[default]
    Uniform,
    /// Relative weight per layer.
    Weighted(Vec<f64>),
}

/// Distribution used to pick a new node's type among its layer's types.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub enum TypeChoice {
    #[default]
    Uniform,
    /// Relative weights, per layer, aligned with `types_per_layer`.
    Weighted(Vec<Vec<f64>>),
}

/// How the m matrix is obtained.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum MSpec {
    Const(u32),
    /// Entries drawn as rounded normal samples, redrawn until positive.
    Normal { mean: f64, std: f64 },
    Matrix(Vec<Vec<u32>>),
}

impl MSpec {
    /// The concrete `layers x layers` matrix. Normal specs draw from the
    /// `STREAM_M` stream of `seed`.
    pub fn resolve(&self, layers: usize, seed: u64) -> Result<Vec<Vec<u32>>, GenError> {
        match self {
            MSpec::Const(k) => Ok(vec![vec![*k; layers]; layers]),
            MSpec::Normal { mean, std } => {
                sample_m_matrix(&mut stream_rng(seed, STREAM_M), layers, *mean, *std)
            }
            MSpec::Matrix(rows) => {
                check_matrix(rows, layers)?;
                Ok(rows.clone())
            }
        }
    }
}

impl fmt::Display for MSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MSpec::Const(k) => write!(f, "const {k}"),
            MSpec::Normal { mean, std } => write!(f, "normal {mean},{std}"),
            MSpec::Matrix(rows) => {
                let rows: Vec<String> = rows
                    .iter()
                    .map(|r| r.iter().map(u32::to_string).collect::<Vec<_>>().join(" "))
                    .collect();
                write!(f, "matrix {}", rows.join("; "))
            }
        }
    }
}

impl FromStr for MSpec {
    type Err = GenError;

    /// Accepts `const K`, `normal MEAN,STD`, `matrix a b; c d` or a bare
    /// integer.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = |msg: &str| GenError::MSpec(format!("{msg}: {s:?}"));
        if let Ok(k) = s.parse::<u32>() {
            return Ok(MSpec::Const(k));
        }
        let (head, rest) = s.split_once(char::is_whitespace).ok_or_else(|| bad("expected a form and a value"))?;
        let rest = rest.trim();
        match head {
            "const" => rest
                .parse()
                .map(MSpec::Const)
                .map_err(|_| bad("const needs a non-negative integer")),
            "normal" => {
                let (mean, std) = rest
                    .split_once(',')
                    .ok_or_else(|| bad("normal needs MEAN,STD"))?;
                let mean: f64 = mean.trim().parse().map_err(|_| bad("bad mean"))?;
                let std: f64 = std.trim().parse().map_err(|_| bad("bad standard deviation"))?;
                if !mean.is_finite() || !std.is_finite() || std < 0.0 {
                    return Err(bad("mean must be finite and std non-negative"));
                }
                Ok(MSpec::Normal { mean, std })
            }
            "matrix" => parse_matrix(&rest.replace(';', "\n")).map(MSpec::Matrix),
            _ => Err(bad("unknown form")),
        }
    }
}

/// Parses a whitespace-separated integer matrix, one row per line. Blank lines
/// and `#` comments are skipped.
pub fn parse_matrix(text: &str) -> Result<Vec<Vec<u32>>, GenError> {
    let mut rows = Vec::new();
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let row = line
            .split_whitespace()
            .map(|t| {
                t.parse::<u32>()
                    .map_err(|_| GenError::MSpec(format!("not a non-negative integer: {t:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(GenError::MSpec("empty matrix".into()));
    }
    Ok(rows)
}

fn check_matrix(rows: &[Vec<u32>], layers: usize) -> Result<(), GenError> {
    if rows.len() != layers {
        return Err(GenError::MatrixShape {
            expected: layers,
            rows: rows.len(),
            cols: rows.first().map_or(0, Vec::len),
        });
    }
    if let Some(r) = rows.iter().find(|r| r.len() != layers) {
        return Err(GenError::MatrixShape {
            expected: layers,
            rows: rows.len(),
            cols: r.len(),
        });
    }
    Ok(())
}

const MAX_REDRAWS: usize = 1_000_000;

/// A `size x size` matrix of rounded normal draws, each redrawn until it is
/// at least 1.
pub fn sample_m_matrix<R: Rng + ?Sized>(
    rng: &mut R,
    size: usize,
    mean: f64,
    std: f64,
) -> Result<Vec<Vec<u32>>, GenError> {
    let normal = Normal::new(mean, std).map_err(|e| GenError::MSpec(e.to_string()))?;
    let mut draw = || {
        for _ in 0..MAX_REDRAWS {
            let v = normal.sample(rng).round();
            if v >= 1.0 {
                return Ok(v.min(u32::MAX as f64) as u32);
            }
        }
        Err(GenError::MSpec(format!(
            "normal({mean}, {std}) produced no positive sample in {MAX_REDRAWS} draws"
        )))
    };
    (0..size)
        .map(|_| (0..size).map(|_| draw()).collect())
        .collect()
}

/// Full parameterisation of a generation run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenParams {
    pub nodes: usize,
    pub layers: usize,
    /// Node type names allowed in each layer.
    pub types_per_layer: Vec<Vec<String>>,
    /// `m[i][j]`: targets a node of layer `i` picks in layer `j`.
    pub m: Vec<Vec<u32>>,
    pub alpha: f64,
    pub beta: f64,
    /// Permits `alpha = beta = 0`, in which case every target is uniform.
    pub uniform_attachment: bool,
    pub layer_choice: LayerChoice,
    pub type_choice: TypeChoice,
    pub seed: u64,
}

impl GenParams {
    /// `layers` layers sharing the default type, with a constant m.
    pub fn simple(nodes: usize, layers: usize, m: u32, alpha: f64, beta: f64, seed: u64) -> Self {
        Self {
            nodes,
            layers,
            types_per_layer: vec![vec![crate::graph::DEFAULT_TYPE_NAME.to_string()]; layers],
            m: vec![vec![m; layers]; layers],
            alpha,
            beta,
            uniform_attachment: false,
            layer_choice: LayerChoice::Uniform,
            type_choice: TypeChoice::Uniform,
            seed,
        }
    }

    pub fn validate(&self) -> Result<(), GenError> {
        if self.layers == 0 {
            return Err(GenError::NoLayers);
        }
        check_matrix(&self.m, self.layers)?;
        if self.types_per_layer.len() != self.layers {
            return Err(GenError::TypesShape {
                expected: self.layers,
                got: self.types_per_layer.len(),
            });
        }
        if let Some(l) = self.types_per_layer.iter().position(Vec::is_empty) {
            return Err(GenError::EmptyTypes(l));
        }
        for (l, types) in self.types_per_layer.iter().enumerate() {
            let unique: BTreeSet<&String> = types.iter().collect();
            if unique.len() != types.len() {
                return Err(GenError::TypeChoice(format!("layer {l} lists a type twice")));
            }
        }
        let ok = |x: f64| x.is_finite() && x >= 0.0;
        if !ok(self.alpha) || !ok(self.beta) {
            return Err(GenError::InvalidAttachment);
        }
        if self.alpha + self.beta == 0.0 && !self.uniform_attachment {
            return Err(GenError::ZeroAttachment);
        }
        if let LayerChoice::Weighted(w) = &self.layer_choice {
            if w.len() != self.layers {
                return Err(GenError::LayerChoice(format!(
                    "{} weights for {} layers",
                    w.len(),
                    self.layers
                )));
            }
            WeightedIndex::new(w).map_err(|e| GenError::LayerChoice(e.to_string()))?;
        }
        if let TypeChoice::Weighted(w) = &self.type_choice {
            if w.len() != self.layers {
                return Err(GenError::TypeChoice(format!(
                    "{} weight rows for {} layers",
                    w.len(),
                    self.layers
                )));
            }
            for (l, row) in w.iter().enumerate() {
                if row.len() != self.types_per_layer[l].len() {
                    return Err(GenError::TypeChoice(format!(
                        "layer {l}: {} weights for {} types",
                        row.len(),
                        self.types_per_layer[l].len()
                    )));
                }
                WeightedIndex::new(row).map_err(|e| GenError::TypeChoice(e.to_string()))?;
            }
        }
        Ok(())
    }

    /// Non-fatal issues with the parameters.
    pub fn warnings(&self) -> Vec<String> {
        (0..self.layers.min(self.m.len()))
            .filter(|&l| self.m[l].get(l) == Some(&0))
            .map(|l| format!("m[{l}][{l}] is 0: layer {l} gets no intra-layer edges"))
            .collect()
    }

    /// Node type registry: every name in `types_per_layer`, in order of first
    /// appearance.
    pub fn type_registry(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for t in self.types_per_layer.iter().flatten() {
            if !out.contains(t) {
                out.push(t.clone());
            }
        }
        out
    }
}

/// Counters collected during a generation run.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenReport {
    pub layer_sizes: Vec<usize>,
    /// Preference pools built over the whole run.
    pub pool_builds: u64,
    /// Largest number of pools built while inserting a single node.
    pub max_pool_builds_per_node: u32,
    /// Nodes still waiting for inter-layer targets when the run ended.
    pub pending_remaining: usize,
    /// Nodes connected by bootstrap flushes.
    pub flushed: u64,
}

/// Generates an undirected HMN.
pub fn generate(params: &GenParams) -> Result<Hmn, GenError> {
    generate_with_report(params).map(|(g, _)| g)
}

pub fn generate_with_report(params: &GenParams) -> Result<(Hmn, GenReport), GenError> {
    let mut gen = Generator::new(params)?;
    for _ in 0..params.nodes {
        gen.step()?;
    }
    let report = gen.report();
    Ok((gen.g, report))
}

/// Preference weights `floor(alpha * d + beta * s)` for `nodes` of `g`, where
/// `d` is the degree and `s` the sum of neighbour degrees in `g`.
pub fn node_distribution(
    g: &Hmn,
    nodes: &[LayeredNode],
    alpha: f64,
    beta: f64,
) -> Result<Vec<(LayeredNode, u64)>, GraphError> {
    let degree = |v: LayeredNode| -> Result<u64, GraphError> {
        let mut d = g.out_edges(v)?.count() as u64;
        if g.is_directed() {
            d += g.in_edges(v)?.count() as u64;
        }
        Ok(d)
    };
    nodes
        .iter()
        .map(|&v| {
            let d = degree(v)?;
            let mut s = 0u64;
            for (u, _) in g.out_edges(v)? {
                s += degree(u)?;
            }
            if g.is_directed() {
                for (u, _) in g.in_edges(v)? {
                    s += degree(u)?;
                }
            }
            Ok((v, preference(alpha, beta, d, s)))
        })
        .collect()
}

fn preference(alpha: f64, beta: f64, degree: u64, neighbor_sum: u64) -> u64 {
    let c = alpha * degree as f64 + beta * neighbor_sum as f64;
    if c > 0.0 {
        c.floor() as u64
    } else {
        0
    }
}

/// Incremental generator state. Every node lives in exactly one layer, so a
/// node id identifies its layered node.
pub(crate) struct Generator<'p> {
    params: &'p GenParams,
    pub(crate) g: Hmn,
    layer_ids: Vec<LayerId>,
    layer_types: Vec<Vec<NodeTypeId>>,
    layer_pick: Option<WeightedIndex<f64>>,
    type_pick: Vec<Option<WeightedIndex<f64>>>,
    rng_layer: ChaCha8Rng,
    rng_type: ChaCha8Rng,
    rng_intra: ChaCha8Rng,
    rng_inter: Vec<ChaCha8Rng>,
    pub(crate) layer_of: Vec<u32>,
    pub(crate) layer_nodes: Vec<Vec<u32>>,
    intra_adj: Vec<Vec<u32>>,
    intra_deg: Vec<u64>,
    intra_nbr_sum: Vec<u64>,
    inter_adj: Vec<Vec<u32>>,
    /// `inter_deg[v * L + j]`: inter-layer edges between `v` and layer `j`.
    inter_deg: Vec<u64>,
    /// `inter_nbr_sum[x * L + i]`, for `x` in layer `j != i`: sum of the
    /// neighbours' degrees in the graph of layer `j`'s intra edges plus the
    /// edges between `i` and `j`.
    inter_nbr_sum: Vec<u64>,
    /// `started[i * L + j]`: a node of layer `i` has made edges toward `j`.
    started: Vec<bool>,
    /// `pending[i * L + j]`: nodes of layer `i` waiting for targets in `j`.
    pub(crate) pending: Vec<Vec<u32>>,
    pool_builds: u64,
    max_pool_builds: u32,
    flushed: u64,
}

impl<'p> Generator<'p> {
    pub(crate) fn new(params: &'p GenParams) -> Result<Self, GenError> {
        params.validate()?;
        let registry = params.type_registry();
        let mut g = Hmn::with_types(
            false,
            registry.clone(),
            vec![crate::graph::DEFAULT_TYPE_NAME.to_string()],
        )?;
        let layer_ids = (1..=params.layers)
            .map(|i| g.add_layer(&i.to_string()))
            .collect::<Result<Vec<_>, _>>()?;
        let layer_types = params
            .types_per_layer
            .iter()
            .map(|names| {
                names
                    .iter()
                    .map(|n| NodeTypeId(registry.iter().position(|r| r == n).expect("registered") as u32))
                    .collect()
            })
            .collect();
        let layer_pick = match &params.layer_choice {
            LayerChoice::Uniform => None,
            LayerChoice::Weighted(w) => {
                Some(WeightedIndex::new(w).map_err(|e| GenError::LayerChoice(e.to_string()))?)
            }
        };
        let type_pick = match &params.type_choice {
            TypeChoice::Uniform => vec![None; params.layers],
            TypeChoice::Weighted(rows) => rows
                .iter()
                .map(|w| {
                    WeightedIndex::new(w)
                        .map(Some)
                        .map_err(|e| GenError::TypeChoice(e.to_string()))
                })
                .collect::<Result<_, _>>()?,
        };
        let l = params.layers;
        Ok(Self {
            params,
            g,
            layer_ids,
            layer_types,
            layer_pick,
            type_pick,
            rng_layer: stream_rng(params.seed, STREAM_LAYER),
            rng_type: stream_rng(params.seed, STREAM_TYPE),
            rng_intra: stream_rng(params.seed, STREAM_INTRA),
            rng_inter: (0..l as u64)
                .map(|j| stream_rng(params.seed, STREAM_INTER_BASE + j))
                .collect(),
            layer_of: Vec::with_capacity(params.nodes),
            layer_nodes: vec![Vec::new(); l],
            intra_adj: Vec::with_capacity(params.nodes),
            intra_deg: Vec::with_capacity(params.nodes),
            intra_nbr_sum: Vec::with_capacity(params.nodes),
            inter_adj: Vec::with_capacity(params.nodes),
            inter_deg: Vec::with_capacity(params.nodes * l),
            inter_nbr_sum: Vec::with_capacity(params.nodes * l),
            started: vec![false; l * l],
            pending: vec![Vec::new(); l * l],
            pool_builds: 0,
            max_pool_builds: 0,
            flushed: 0,
        })
    }

    fn ln(&self, v: u32) -> LayeredNode {
        LayeredNode::new(NodeId(v), self.layer_ids[self.layer_of[v as usize] as usize])
    }

    /// Inserts one node and makes its connections. Returns its id.
    pub(crate) fn step(&mut self) -> Result<u32, GenError> {
        self.step_into(None)
    }

    /// Like `step`, with the layer optionally forced instead of drawn.
    pub(crate) fn step_into(&mut self, forced: Option<usize>) -> Result<u32, GenError> {
        let l = self.params.layers;
        let i = match (forced, &self.layer_pick) {
            (Some(i), _) => i,
            (None, None) => self.rng_layer.random_range(0..l),
            (None, Some(w)) => w.sample(&mut self.rng_layer),
        };
        let types = &self.layer_types[i];
        let t = match &self.type_pick[i] {
            None => types[self.rng_type.random_range(0..types.len())],
            Some(w) => types[w.sample(&mut self.rng_type)],
        };
        let id = self.g.add_node(t, &[self.layer_ids[i]])?;
        let v = id.0;
        self.layer_of.push(i as u32);
        self.intra_adj.push(Vec::new());
        self.intra_deg.push(0);
        self.intra_nbr_sum.push(0);
        self.inter_adj.push(Vec::new());
        self.inter_deg.extend(std::iter::repeat_n(0, l));
        self.inter_nbr_sum.extend(std::iter::repeat_n(0, l));

        let mut builds = 0u32;
        builds += self.connection1(v, i)?;
        for j in 0..l {
            if j != i {
                builds += self.connection2(v, i, j)?;
            }
        }
        self.layer_nodes[i].push(v);
        self.max_pool_builds = self.max_pool_builds.max(builds);
        self.pool_builds += builds as u64;
        Ok(v)
    }

    /// Intra-layer connections of `v` in layer `i`. Returns the number of
    /// preference pools built.
    fn connection1(&mut self, v: u32, i: usize) -> Result<u32, GenError> {
        let m = self.params.m[i][i] as usize;
        let existing = self.layer_nodes[i].len();
        if m == 0 || existing < m {
            return Ok(0);
        }
        if existing == m {
            for k in 0..existing {
                let u = self.layer_nodes[i][k];
                self.add_intra(v, u)?;
            }
            return Ok(0);
        }
        let weights = self.intra_weights(i);
        let targets = sample_distinct(&mut self.rng_intra, &self.layer_nodes[i], weights, m);
        for u in targets {
            self.add_intra(v, u)?;
        }
        Ok(1)
    }

    /// Inter-layer connections of `v` (layer `i`) toward layer `j`.
    fn connection2(&mut self, v: u32, i: usize, j: usize) -> Result<u32, GenError> {
        let l = self.params.layers;
        let m = self.params.m[i][j] as usize;
        if m == 0 {
            return Ok(0);
        }
        let pair = i * l + j;
        let dst_size = self.layer_nodes[j].len();
        if !self.started[pair] {
            if dst_size < m {
                self.pending[pair].push(v);
                return Ok(0);
            }
            let picks = index::sample(&mut self.rng_inter[j], dst_size, m);
            let targets: Vec<u32> = picks.iter().map(|k| self.layer_nodes[j][k]).collect();
            let mut waiting = std::mem::take(&mut self.pending[pair]);
            waiting.push(v);
            for &w in &waiting {
                for &u in &targets {
                    self.add_inter(w, u)?;
                }
            }
            self.flushed += waiting.len() as u64;
            self.started[pair] = true;
            return Ok(0);
        }
        let weights = self.inter_weights(i, j);
        let cands = &self.layer_nodes[j];
        let targets = sample_distinct(&mut self.rng_inter[j], cands, weights, m);
        for u in targets {
            self.add_inter(v, u)?;
        }
        Ok(1)
    }

    /// Preference weights of layer `j`'s nodes in the graph made of layer
    /// `j`'s intra edges and all edges between layers `i` and `j`.
    pub(crate) fn inter_weights(&self, i: usize, j: usize) -> Vec<u64> {
        let l = self.params.layers;
        self.layer_nodes[j]
            .iter()
            .map(|&x| {
                let x = x as usize;
                let d = self.intra_deg[x] + self.inter_deg[x * l + i];
                preference(self.params.alpha, self.params.beta, d, self.inter_nbr_sum[x * l + i])
            })
            .collect()
    }

    pub(crate) fn intra_weights(&self, i: usize) -> Vec<u64> {
        self.layer_nodes[i]
            .iter()
            .map(|&u| {
                let u = u as usize;
                preference(self.params.alpha, self.params.beta, self.intra_deg[u], self.intra_nbr_sum[u])
            })
            .collect()
    }

    fn add_intra(&mut self, a: u32, b: u32) -> Result<(), GenError> {
        let (sa, sb) = (self.ln(a), self.ln(b));
        if self.g.has_edge(sa, sb, EdgeTypeId(0)) {
            return Ok(());
        }
        self.g.add_edge(sa, sb, EdgeTypeId(0), 1.0)?;
        let l = self.params.layers;
        let j = self.layer_of[a as usize] as usize;
        let (a, b) = (a as usize, b as usize);
        // Every pool over layer j sees the old neighbours' degrees rise by one.
        for x in [a, b] {
            for &w in &self.intra_adj[x] {
                let w = w as usize;
                self.intra_nbr_sum[w] += 1;
                for i in (0..l).filter(|&i| i != j) {
                    self.inter_nbr_sum[w * l + i] += 1;
                }
            }
        }
        self.intra_deg[a] += 1;
        self.intra_deg[b] += 1;
        self.intra_nbr_sum[a] += self.intra_deg[b];
        self.intra_nbr_sum[b] += self.intra_deg[a];
        for i in (0..l).filter(|&i| i != j) {
            self.inter_nbr_sum[a * l + i] += self.intra_deg[b] + self.inter_deg[b * l + i];
            self.inter_nbr_sum[b * l + i] += self.intra_deg[a] + self.inter_deg[a * l + i];
        }
        self.intra_adj[a].push(b as u32);
        self.intra_adj[b].push(a as u32);
        Ok(())
    }

    fn add_inter(&mut self, a: u32, b: u32) -> Result<(), GenError> {
        let (sa, sb) = (self.ln(a), self.ln(b));
        if self.g.has_edge(sa, sb, EdgeTypeId(0)) {
            return Ok(());
        }
        self.g.add_edge(sa, sb, EdgeTypeId(0), 1.0)?;
        let l = self.params.layers;
        let (la, lb) = (self.layer_of[a as usize] as usize, self.layer_of[b as usize] as usize);
        self.inter_deg[a as usize * l + lb] += 1;
        self.inter_deg[b as usize * l + la] += 1;
        for (x, lx, y, ly) in [(a as usize, la, b as usize, lb), (b as usize, lb, a as usize, la)] {
            // In the pool for candidates of layer lx (sources in ly), x gains
            // y as a neighbour and x's degree rises by one.
            self.inter_nbr_sum[x * l + ly] += self.inter_deg[y * l + lx];
            for &w in &self.intra_adj[x] {
                self.inter_nbr_sum[w as usize * l + ly] += 1;
            }
            // In the pool for candidates of layer ly, x's degree is its edge
            // count toward ly.
            for &z in &self.inter_adj[x] {
                if self.layer_of[z as usize] as usize == ly {
                    self.inter_nbr_sum[z as usize * l + lx] += 1;
                }
            }
        }
        self.inter_adj[a as usize].push(b);
        self.inter_adj[b as usize].push(a);
        Ok(())
    }

    pub(crate) fn report(&self) -> GenReport {
        GenReport {
            layer_sizes: self.layer_nodes.iter().map(Vec::len).collect(),
            pool_builds: self.pool_builds,
            max_pool_builds_per_node: self.max_pool_builds,
            pending_remaining: self.pending.iter().map(Vec::len).sum(),
            flushed: self.flushed,
        }
    }
}

/// Draws up to `m` distinct candidates. Each draw picks a candidate with
/// probability proportional to its weight, then zeroes that weight. When the
/// positive weights run out first, the remaining picks are uniform over the
/// candidates not yet chosen.
fn sample_distinct<R: Rng + ?Sized>(
    rng: &mut R,
    cands: &[u32],
    mut weights: Vec<u64>,
    m: usize,
) -> Vec<u32> {
    let m = m.min(cands.len());
    let mut chosen = vec![false; cands.len()];
    let mut picks = Vec::with_capacity(m);
    let mut total: u64 = weights.iter().sum();
    while picks.len() < m && total > 0 {
        let mut r = rng.random_range(0..total);
        let mut k = 0;
        while r >= weights[k] {
            r -= weights[k];
            k += 1;
        }
        picks.push(cands[k]);
        chosen[k] = true;
        total -= weights[k];
        weights[k] = 0;
    }
    if picks.len() < m {
        let rest: Vec<usize> = (0..cands.len()).filter(|&k| !chosen[k]).collect();
        for k in index::sample(rng, rest.len(), m - picks.len()) {
            picks.push(cands[rest[k]]);
        }
    }
    picks
}
