//! The heterogeneous multi-layered network structure.
//!
//! An [`Hmn`] holds a layer registry, node and edge type registries, a node
//! registry mapping every node to one type and a non-empty set of layers, and
//! an edge store indexed by [`LayeredNode`]. A node appears once per layer it
//! belongs to; each such occurrence is a separate vertex for every measure.
//!
//! Undirected graphs store each edge once with its endpoints in canonical
//! order and answer adjacency queries from both sides.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Name of the default node and edge type.
pub const DEFAULT_TYPE_NAME: &str = "⊥";

macro_rules! id_newtype {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(
            Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
        )]
        #[serde(transparent)]
        pub struct $name(pub u32);

        impl $name {
            #[inline]
            pub fn index(self) -> usize {
                self.0 as usize
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}", self.0)
            }
        }
    };
}

id_newtype!(
    /// Append-only node identifier, global across layers.
    NodeId
);
id_newtype!(
    /// Index into the layer registry.
    LayerId
);
id_newtype!(
    /// Index into the node type registry. Id 0 is the default type.
    NodeTypeId
);
id_newtype!(
    /// Index into the edge type registry. Id 0 is the default type.
    EdgeTypeId
);

/// A node occurrence in one specific layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LayeredNode {
    pub node: NodeId,
    pub layer: LayerId,
}

impl LayeredNode {
    pub fn new(node: NodeId, layer: LayerId) -> Self {
        Self { node, layer }
    }
}

impl fmt::Display for LayeredNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.node, self.layer)
    }
}

/// A stored edge. For undirected graphs `src <= dst` always holds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub src: LayeredNode,
    pub dst: LayeredNode,
    pub etype: EdgeTypeId,
    pub weight: f64,
}

impl Edge {
    pub fn is_intra(&self) -> bool {
        self.src.layer == self.dst.layer
    }

    pub fn is_inter(&self) -> bool {
        !self.is_intra()
    }

    fn key(&self) -> (LayeredNode, LayeredNode, EdgeTypeId) {
        (self.src, self.dst, self.etype)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("layer name {0:?} is already registered")]
    DuplicateLayer(String),
    #[error("type name {0:?} is already registered")]
    DuplicateType(String),
    #[error("type registry must contain at least one type")]
    EmptyTypeRegistry,
    #[error("unknown layer id {0}")]
    UnknownLayer(LayerId),
    #[error("unknown node id {0}")]
    UnknownNode(NodeId),
    #[error("unknown node type id {0}")]
    UnknownNodeType(NodeTypeId),
    #[error("unknown edge type id {0}")]
    UnknownEdgeType(EdgeTypeId),
    #[error("a node must belong to at least one layer")]
    EmptyLayerSet,
    #[error("node {} is not a member of layer {}", .0.node, .0.layer)]
    NotInLayer(LayeredNode),
    #[error("edge {src} -> {dst} with type {etype} already exists")]
    DuplicateEdge {
        src: LayeredNode,
        dst: LayeredNode,
        etype: EdgeTypeId,
    },
    #[error("self-loop on {0}")]
    SelfLoop(LayeredNode),
    #[error("edge weight must be positive and finite, got {0}")]
    InvalidWeight(f64),
    #[error("an empty layer selection is not allowed")]
    EmptySelection,
    #[error("endpoint {index} is out of range for {count} nodes")]
    EndpointOutOfRange { index: u32, count: u32 },
    #[error("inter-layer edge list connects layer {0} to itself")]
    InterSameLayer(u32),
    #[error("invalid input: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct NodeRecord {
    pub(crate) vtype: NodeTypeId,
    /// Sorted, non-empty.
    pub(crate) layers: Vec<LayerId>,
    /// Slot index per entry of `layers`.
    pub(crate) slots: Vec<u32>,
}

/// One adjacency entry: the vertex slot on the other side and the edge index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Adj {
    pub(crate) slot: u32,
    pub(crate) edge: u32,
}

/// A heterogeneous multi-layered network `(V, E, L, T, R)`.
#[derive(Debug, Clone)]
pub struct Hmn {
    directed: bool,
    layers: Vec<String>,
    layer_names: HashMap<String, LayerId>,
    node_types: Vec<String>,
    edge_types: Vec<String>,
    nodes: Vec<NodeRecord>,
    /// Vertex slot -> layered node.
    slot_nodes: Vec<LayeredNode>,
    edges: Vec<Edge>,
    edge_keys: HashSet<(LayeredNode, LayeredNode, EdgeTypeId)>,
    out_adj: Vec<Vec<Adj>>,
    /// Only populated for directed graphs.
    in_adj: Vec<Vec<Adj>>,
    /// `type_layer[t][l]` lists the nodes of type `t` in layer `l`, ascending.
    type_layer: Vec<Vec<Vec<NodeId>>>,
    unit_weights: bool,
}

impl Hmn {
    /// An empty network with no layers and the default types registered.
    pub fn new(directed: bool) -> Self {
        Self::with_types(
            directed,
            vec![DEFAULT_TYPE_NAME.to_string()],
            vec![DEFAULT_TYPE_NAME.to_string()],
        )
        .expect("default registries are valid")
    }

    /// An empty network with explicit type registries. The first entry of each
    /// registry takes id 0 and acts as the default type.
    pub fn with_types(
        directed: bool,
        node_types: Vec<String>,
        edge_types: Vec<String>,
    ) -> Result<Self, GraphError> {
        if node_types.is_empty() || edge_types.is_empty() {
            return Err(GraphError::EmptyTypeRegistry);
        }
        check_unique(&node_types)?;
        check_unique(&edge_types)?;
        let type_count = node_types.len();
        Ok(Self {
            directed,
            layers: Vec::new(),
            layer_names: HashMap::new(),
            node_types,
            edge_types,
            nodes: Vec::new(),
            slot_nodes: Vec::new(),
            edges: Vec::new(),
            edge_keys: HashSet::new(),
            out_adj: Vec::new(),
            in_adj: Vec::new(),
            type_layer: vec![Vec::new(); type_count],
            unit_weights: true,
        })
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn add_layer(&mut self, name: &str) -> Result<LayerId, GraphError> {
        if self.layer_names.contains_key(name) {
            return Err(GraphError::DuplicateLayer(name.to_string()));
        }
        let id = LayerId(self.layers.len() as u32);
        self.layers.push(name.to_string());
        self.layer_names.insert(name.to_string(), id);
        for per_type in &mut self.type_layer {
            per_type.push(Vec::new());
        }
        Ok(id)
    }

    pub fn add_node_type(&mut self, name: &str) -> Result<NodeTypeId, GraphError> {
        if self.node_types.iter().any(|t| t == name) {
            return Err(GraphError::DuplicateType(name.to_string()));
        }
        self.node_types.push(name.to_string());
        self.type_layer.push(vec![Vec::new(); self.layers.len()]);
        Ok(NodeTypeId(self.node_types.len() as u32 - 1))
    }

    pub fn add_edge_type(&mut self, name: &str) -> Result<EdgeTypeId, GraphError> {
        if self.edge_types.iter().any(|t| t == name) {
            return Err(GraphError::DuplicateType(name.to_string()));
        }
        self.edge_types.push(name.to_string());
        Ok(EdgeTypeId(self.edge_types.len() as u32 - 1))
    }

    /// Registers a node of type `vtype` present in every layer of `layers`.
    pub fn add_node(
        &mut self,
        vtype: NodeTypeId,
        layers: &[LayerId],
    ) -> Result<NodeId, GraphError> {
        if vtype.index() >= self.node_types.len() {
            return Err(GraphError::UnknownNodeType(vtype));
        }
        let set: BTreeSet<LayerId> = layers.iter().copied().collect();
        if set.is_empty() {
            return Err(GraphError::EmptyLayerSet);
        }
        if let Some(&bad) = set.iter().find(|l| l.index() >= self.layers.len()) {
            return Err(GraphError::UnknownLayer(bad));
        }
        let id = NodeId(self.nodes.len() as u32);
        let layers: Vec<LayerId> = set.into_iter().collect();
        let mut slots = Vec::with_capacity(layers.len());
        for &l in &layers {
            let slot = self.slot_nodes.len() as u32;
            self.slot_nodes.push(LayeredNode::new(id, l));
            self.out_adj.push(Vec::new());
            if self.directed {
                self.in_adj.push(Vec::new());
            }
            self.type_layer[vtype.index()][l.index()].push(id);
            slots.push(slot);
        }
        self.nodes.push(NodeRecord {
            vtype,
            layers,
            slots,
        });
        Ok(id)
    }

    /// Stores an edge. Undirected edges are canonicalised so that
    /// `src <= dst`; the returned value is the stored form.
    pub fn add_edge(
        &mut self,
        src: LayeredNode,
        dst: LayeredNode,
        etype: EdgeTypeId,
        weight: f64,
    ) -> Result<Edge, GraphError> {
        if etype.index() >= self.edge_types.len() {
            return Err(GraphError::UnknownEdgeType(etype));
        }
        if !(weight > 0.0 && weight.is_finite()) {
            return Err(GraphError::InvalidWeight(weight));
        }
        let src_slot = self.slot_of(src)?;
        let dst_slot = self.slot_of(dst)?;
        if src == dst {
            return Err(GraphError::SelfLoop(src));
        }
        let (src, dst, src_slot, dst_slot) = if !self.directed && dst < src {
            (dst, src, dst_slot, src_slot)
        } else {
            (src, dst, src_slot, dst_slot)
        };
        let edge = Edge {
            src,
            dst,
            etype,
            weight,
        };
        if !self.edge_keys.insert(edge.key()) {
            return Err(GraphError::DuplicateEdge { src, dst, etype });
        }
        let idx = self.edges.len() as u32;
        self.edges.push(edge);
        self.out_adj[src_slot].push(Adj {
            slot: dst_slot as u32,
            edge: idx,
        });
        if self.directed {
            self.in_adj[dst_slot].push(Adj {
                slot: src_slot as u32,
                edge: idx,
            });
        } else {
            self.out_adj[dst_slot].push(Adj {
                slot: src_slot as u32,
                edge: idx,
            });
        }
        if weight != 1.0 {
            self.unit_weights = false;
        }
        Ok(edge)
    }

    /// Whether an edge with exactly this key is stored (canonicalised for
    /// undirected graphs).
    pub fn has_edge(&self, src: LayeredNode, dst: LayeredNode, etype: EdgeTypeId) -> bool {
        let (a, b) = if !self.directed && dst < src {
            (dst, src)
        } else {
            (src, dst)
        };
        self.edge_keys.contains(&(a, b, etype))
    }

    // --- registries ---------------------------------------------------------

    pub fn layer_count(&self) -> usize {
        self.layers.len()
    }

    pub fn layer_ids(&self) -> impl Iterator<Item = LayerId> + '_ {
        (0..self.layers.len() as u32).map(LayerId)
    }

    pub fn layer_name(&self, l: LayerId) -> Option<&str> {
        self.layers.get(l.index()).map(String::as_str)
    }

    pub fn layer_by_name(&self, name: &str) -> Option<LayerId> {
        self.layer_names.get(name).copied()
    }

    pub fn node_type_count(&self) -> usize {
        self.node_types.len()
    }

    pub fn node_type_ids(&self) -> impl Iterator<Item = NodeTypeId> + '_ {
        (0..self.node_types.len() as u32).map(NodeTypeId)
    }

    pub fn node_type_name(&self, t: NodeTypeId) -> Option<&str> {
        self.node_types.get(t.index()).map(String::as_str)
    }

    pub fn node_type_by_name(&self, name: &str) -> Option<NodeTypeId> {
        self.node_types
            .iter()
            .position(|t| t == name)
            .map(|i| NodeTypeId(i as u32))
    }

    pub fn edge_type_count(&self) -> usize {
        self.edge_types.len()
    }

    pub fn edge_type_name(&self, t: EdgeTypeId) -> Option<&str> {
        self.edge_types.get(t.index()).map(String::as_str)
    }

    pub fn edge_type_by_name(&self, name: &str) -> Option<EdgeTypeId> {
        self.edge_types
            .iter()
            .position(|t| t == name)
            .map(|i| EdgeTypeId(i as u32))
    }

    // --- nodes and edges ----------------------------------------------------

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.nodes.len() as u32).map(NodeId)
    }

    /// Number of (node, layer) occurrences.
    pub fn layered_node_count(&self) -> usize {
        self.slot_nodes.len()
    }

    /// All layered nodes, grouped by node in ascending id order.
    pub fn layered_nodes(&self) -> impl Iterator<Item = LayeredNode> + '_ {
        self.slot_nodes.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// True when every edge weight equals 1.
    pub fn has_unit_weights(&self) -> bool {
        self.unit_weights
    }

    /// `R_VL`: the layer set of a node.
    pub fn r_vl(&self, v: NodeId) -> Result<&[LayerId], GraphError> {
        self.nodes
            .get(v.index())
            .map(|n| n.layers.as_slice())
            .ok_or(GraphError::UnknownNode(v))
    }

    /// `R_VT`: the type of a node.
    pub fn r_vt(&self, v: NodeId) -> Result<NodeTypeId, GraphError> {
        self.nodes
            .get(v.index())
            .map(|n| n.vtype)
            .ok_or(GraphError::UnknownNode(v))
    }

    /// `R_ET`: the type of a stored edge.
    pub fn r_et(&self, e: &Edge) -> Result<EdgeTypeId, GraphError> {
        if self.edge_keys.contains(&e.key()) {
            Ok(e.etype)
        } else {
            Err(GraphError::Invalid(format!(
                "edge {} -> {} is not stored",
                e.src, e.dst
            )))
        }
    }

    /// `R_TL`: nodes of type `t` present in layer `l`, in ascending id order.
    /// This is an index lookup; no scan over the node registry happens.
    pub fn r_tl(&self, t: NodeTypeId, l: LayerId) -> Result<&[NodeId], GraphError> {
        let per_type = self
            .type_layer
            .get(t.index())
            .ok_or(GraphError::UnknownNodeType(t))?;
        per_type
            .get(l.index())
            .map(Vec::as_slice)
            .ok_or(GraphError::UnknownLayer(l))
    }

    /// `R_L`: every node present in layer `l`, in ascending id order.
    pub fn r_l(&self, l: LayerId) -> Result<Vec<NodeId>, GraphError> {
        if l.index() >= self.layers.len() {
            return Err(GraphError::UnknownLayer(l));
        }
        let mut out: Vec<NodeId> = self
            .type_layer
            .iter()
            .flat_map(|per_type| per_type[l.index()].iter().copied())
            .collect();
        out.sort_unstable();
        Ok(out)
    }

    pub fn contains(&self, v: LayeredNode) -> bool {
        self.slot_of(v).is_ok()
    }

    /// Edges leaving `v` (for undirected graphs: every incident edge), paired
    /// with the layered node on the other side.
    pub fn out_edges(
        &self,
        v: LayeredNode,
    ) -> Result<impl Iterator<Item = (LayeredNode, &Edge)> + '_, GraphError> {
        let slot = self.slot_of(v)?;
        Ok(self.out_adj[slot]
            .iter()
            .map(move |a| (self.slot_nodes[a.slot as usize], &self.edges[a.edge as usize])))
    }

    /// Edges entering `v` (for undirected graphs: every incident edge).
    pub fn in_edges(
        &self,
        v: LayeredNode,
    ) -> Result<impl Iterator<Item = (LayeredNode, &Edge)> + '_, GraphError> {
        let slot = self.slot_of(v)?;
        Ok(self.in_adj_slot(slot)
            .iter()
            .map(move |a| (self.slot_nodes[a.slot as usize], &self.edges[a.edge as usize])))
    }

    /// Rebuilds the type-layer index from the node registry. Used to check the
    /// live index against a fresh one.
    pub fn rebuild_type_layer_index(&self) -> Vec<Vec<Vec<NodeId>>> {
        let mut index = vec![vec![Vec::new(); self.layers.len()]; self.node_types.len()];
        for (i, rec) in self.nodes.iter().enumerate() {
            for l in &rec.layers {
                index[rec.vtype.index()][l.index()].push(NodeId(i as u32));
            }
        }
        index
    }

    pub fn type_layer_index(&self) -> &[Vec<Vec<NodeId>>] {
        &self.type_layer
    }

    /// Checks every structural invariant; returns the first violation.
    pub fn validate(&self) -> Result<(), GraphError> {
        if self.layers.is_empty() {
            return Err(GraphError::Invalid("an HMN needs at least one layer".into()));
        }
        if self.node_types.is_empty() || self.edge_types.is_empty() {
            return Err(GraphError::EmptyTypeRegistry);
        }
        for rec in &self.nodes {
            if rec.layers.is_empty() {
                return Err(GraphError::EmptyLayerSet);
            }
        }
        for e in &self.edges {
            for end in [e.src, e.dst] {
                let layers = self.r_vl(end.node)?;
                if layers.binary_search(&end.layer).is_err() {
                    return Err(GraphError::NotInLayer(end));
                }
            }
            if e.weight.is_nan() || e.weight <= 0.0 {
                return Err(GraphError::InvalidWeight(e.weight));
            }
        }
        if self.rebuild_type_layer_index() != self.type_layer {
            return Err(GraphError::Invalid("type-layer index is stale".into()));
        }
        Ok(())
    }

    // --- crate-internal slot access ------------------------------------------

    pub(crate) fn slot_of(&self, v: LayeredNode) -> Result<usize, GraphError> {
        let rec = self
            .nodes
            .get(v.node.index())
            .ok_or(GraphError::UnknownNode(v.node))?;
        rec.layers
            .binary_search(&v.layer)
            .map(|i| rec.slots[i] as usize)
            .map_err(|_| GraphError::NotInLayer(v))
    }

    pub(crate) fn slot_node(&self, slot: usize) -> LayeredNode {
        self.slot_nodes[slot]
    }

    pub(crate) fn slot_type(&self, slot: usize) -> NodeTypeId {
        self.nodes[self.slot_nodes[slot].node.index()].vtype
    }

    pub(crate) fn out_adj_slot(&self, slot: usize) -> &[Adj] {
        &self.out_adj[slot]
    }

    pub(crate) fn in_adj_slot(&self, slot: usize) -> &[Adj] {
        if self.directed {
            &self.in_adj[slot]
        } else {
            &self.out_adj[slot]
        }
    }

    pub(crate) fn edge_at(&self, idx: u32) -> &Edge {
        &self.edges[idx as usize]
    }

}

impl PartialEq for Hmn {
    /// Structural equality: registries, node records and the edge set.
    /// Edge insertion order is ignored.
    fn eq(&self, other: &Self) -> bool {
        if self.directed != other.directed
            || self.layers != other.layers
            || self.node_types != other.node_types
            || self.edge_types != other.edge_types
            || self.nodes.len() != other.nodes.len()
            || self.edges.len() != other.edges.len()
        {
            return false;
        }
        let same_nodes = self
            .nodes
            .iter()
            .zip(&other.nodes)
            .all(|(a, b)| a.vtype == b.vtype && a.layers == b.layers);
        same_nodes && sorted_edges(self) == sorted_edges(other)
    }
}

/// Edges in canonical order: by source, destination, then type.
pub fn sorted_edges(g: &Hmn) -> Vec<Edge> {
    let mut edges = g.edges.clone();
    edges.sort_by_key(|e| e.key());
    edges
}

fn check_unique(names: &[String]) -> Result<(), GraphError> {
    let mut seen = HashSet::new();
    for n in names {
        if !seen.insert(n.as_str()) {
            return Err(GraphError::DuplicateType(n.clone()));
        }
    }
    Ok(())
}

/// Extracts the sub-network induced by `layers`. The layer and type registries
/// are kept whole so ids stay valid; nodes with no layer left are dropped and
/// the survivors renumbered in ascending order of their original id.
pub fn induced_subhmn(g: &Hmn, layers: &[LayerId]) -> Result<Hmn, GraphError> {
    induced_subhmn_with_map(g, layers).map(|(h, _)| h)
}

/// Like [`induced_subhmn`], also returning the original id of every node in
/// the result.
pub fn induced_subhmn_with_map(
    g: &Hmn,
    layers: &[LayerId],
) -> Result<(Hmn, Vec<NodeId>), GraphError> {
    if layers.is_empty() {
        return Err(GraphError::EmptySelection);
    }
    let mut keep = vec![false; g.layer_count()];
    for &l in layers {
        *keep
            .get_mut(l.index())
            .ok_or(GraphError::UnknownLayer(l))? = true;
    }
    let mut out = Hmn::with_types(g.directed, g.node_types.clone(), g.edge_types.clone())?;
    for name in &g.layers {
        out.add_layer(name)?;
    }
    let mut remap: Vec<Option<NodeId>> = vec![None; g.node_count()];
    let mut origin = Vec::new();
    for (i, rec) in g.nodes.iter().enumerate() {
        let kept: Vec<LayerId> = rec
            .layers
            .iter()
            .copied()
            .filter(|l| keep[l.index()])
            .collect();
        if kept.is_empty() {
            continue;
        }
        remap[i] = Some(out.add_node(rec.vtype, &kept)?);
        origin.push(NodeId(i as u32));
    }
    for e in &g.edges {
        if !(keep[e.src.layer.index()] && keep[e.dst.layer.index()]) {
            continue;
        }
        let map = |v: LayeredNode| {
            LayeredNode::new(remap[v.node.index()].expect("endpoint kept"), v.layer)
        };
        out.add_edge(map(e.src), map(e.dst), e.etype, e.weight)?;
    }
    Ok((out, origin))
}
