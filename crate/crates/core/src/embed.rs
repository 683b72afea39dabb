//! Constructive embeddings of simpler network classes into an [`Hmn`].
//!
//! Each constructor builds the HMN that represents the input network without
//! loss: a homogeneous graph becomes a single layer with default types, a
//! heterogeneous graph keeps its type functions on a single layer, a
//! multi-layered network maps layer for layer, and a multiplex network shares
//! one vertex set across all layers with no inter-layer edges.

use std::collections::{BTreeMap, BTreeSet};

use crate::graph::{
    EdgeTypeId, GraphError, Hmn, LayerId, LayeredNode, NodeId, NodeTypeId, DEFAULT_TYPE_NAME,
};

/// Name used for the single layer of homogeneous and heterogeneous embeddings.
pub const SINGLE_LAYER_NAME: &str = "1";

/// Embeds a homogeneous graph on `n` nodes. Nodes keep their indices as ids.
pub fn from_homogeneous(n: u32, edges: &[(u32, u32)], directed: bool) -> Result<Hmn, GraphError> {
    from_homogeneous_weighted(
        n,
        &edges.iter().map(|&(a, b)| (a, b, 1.0)).collect::<Vec<_>>(),
        directed,
    )
}

pub fn from_homogeneous_weighted(
    n: u32,
    edges: &[(u32, u32, f64)],
    directed: bool,
) -> Result<Hmn, GraphError> {
    let mut g = Hmn::new(directed);
    let layer = g.add_layer(SINGLE_LAYER_NAME)?;
    for _ in 0..n {
        g.add_node(NodeTypeId(0), &[layer])?;
    }
    for &(a, b, w) in edges {
        check_endpoint(a, n)?;
        check_endpoint(b, n)?;
        g.add_edge(
            LayeredNode::new(NodeId(a), layer),
            LayeredNode::new(NodeId(b), layer),
            EdgeTypeId(0),
            w,
        )?;
    }
    Ok(g)
}

/// A heterogeneous network `(V, E, {A, B}, {f1, f2})`.
#[derive(Debug, Clone, Default)]
pub struct HeterogeneousNetwork {
    /// The node type set `A`.
    pub node_types: Vec<String>,
    /// The edge type set `B`.
    pub edge_types: Vec<String>,
    /// `f1`: node `i` has type `node_type_of[i]` (index into `node_types`).
    pub node_type_of: Vec<u32>,
    /// Edges as `(src, dst, f2(edge))`.
    pub edges: Vec<(u32, u32, u32)>,
    pub directed: bool,
}

/// Single-layer embedding with `T_V = A`, `T_E = B`, `R_VT = f1`, `R_ET = f2`.
pub fn from_heterogeneous(net: &HeterogeneousNetwork) -> Result<Hmn, GraphError> {
    let mut g = Hmn::with_types(net.directed, net.node_types.clone(), net.edge_types.clone())?;
    let layer = g.add_layer(SINGLE_LAYER_NAME)?;
    for &t in &net.node_type_of {
        if t as usize >= net.node_types.len() {
            return Err(GraphError::UnknownNodeType(NodeTypeId(t)));
        }
        g.add_node(NodeTypeId(t), &[layer])?;
    }
    let n = net.node_type_of.len() as u32;
    for &(a, b, t) in &net.edges {
        check_endpoint(a, n)?;
        check_endpoint(b, n)?;
        if t as usize >= net.edge_types.len() {
            return Err(GraphError::UnknownEdgeType(EdgeTypeId(t)));
        }
        g.add_edge(
            LayeredNode::new(NodeId(a), layer),
            LayeredNode::new(NodeId(b), layer),
            EdgeTypeId(t),
            1.0,
        )?;
    }
    Ok(g)
}

/// Inter-layer edges from layer `from` to layer `to` (0-based layer indices).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InterLayerEdges {
    pub from: u32,
    pub to: u32,
    pub edges: Vec<(u32, u32)>,
}

/// A multi-layered network `(Y, G_intra, G_inter)` with `Y = {0, .., k-1}`.
///
/// Node ids are shared across layers: the same id listed in two layers is one
/// vertex present in both.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MultilayerNetwork {
    /// `V_i` for each layer.
    pub layer_nodes: Vec<Vec<u32>>,
    /// `E_i` for each layer.
    pub intra: Vec<Vec<(u32, u32)>>,
    pub inter: Vec<InterLayerEdges>,
}

/// Multi-layered embedding. Every node takes the type of the lowest layer it
/// appears in (`layer{i}`); intra edges of layer `i` get type `intra{i}` and
/// inter edges from `i` to `j` get type `inter{i}-{j}`. Node ids are remapped
/// to dense [`NodeId`]s in ascending order of the input ids.
pub fn from_multilayered(net: &MultilayerNetwork) -> Result<Hmn, GraphError> {
    let k = net.layer_nodes.len();
    if k == 0 {
        return Err(GraphError::Invalid("a multi-layered network needs k >= 1".into()));
    }
    if net.intra.len() > k {
        return Err(GraphError::Invalid(format!(
            "{} intra edge lists given for {k} layers",
            net.intra.len()
        )));
    }
    let mut membership: BTreeMap<u32, BTreeSet<u32>> = BTreeMap::new();
    for (i, nodes) in net.layer_nodes.iter().enumerate() {
        for &v in nodes {
            membership.entry(v).or_default().insert(i as u32);
        }
    }
    let node_types: Vec<String> = (0..k).map(|i| format!("layer{i}")).collect();
    let mut edge_types: Vec<String> = (0..k).map(|i| format!("intra{i}")).collect();
    for block in &net.inter {
        if block.from == block.to {
            return Err(GraphError::InterSameLayer(block.from));
        }
        if block.from as usize >= k || block.to as usize >= k {
            return Err(GraphError::UnknownLayer(LayerId(block.from.max(block.to))));
        }
        let name = format!("inter{}-{}", block.from, block.to);
        if !edge_types.contains(&name) {
            edge_types.push(name);
        }
    }
    let mut g = Hmn::with_types(false, node_types, edge_types)?;
    for i in 0..k {
        g.add_layer(&i.to_string())?;
    }
    let mut ids: BTreeMap<u32, NodeId> = BTreeMap::new();
    for (&v, layers) in &membership {
        let lowest = *layers.iter().next().expect("non-empty membership");
        let layer_ids: Vec<LayerId> = layers.iter().map(|&l| LayerId(l)).collect();
        ids.insert(v, g.add_node(NodeTypeId(lowest), &layer_ids)?);
    }
    let lookup = |v: u32, layer: u32| -> Result<LayeredNode, GraphError> {
        let id = ids
            .get(&v)
            .copied()
            .ok_or_else(|| GraphError::Invalid(format!("node {v} is not listed in any layer")))?;
        Ok(LayeredNode::new(id, LayerId(layer)))
    };
    for (i, edges) in net.intra.iter().enumerate() {
        let et = EdgeTypeId(i as u32);
        for &(a, b) in edges {
            g.add_edge(lookup(a, i as u32)?, lookup(b, i as u32)?, et, 1.0)?;
        }
    }
    for block in &net.inter {
        let et = g
            .edge_type_by_name(&format!("inter{}-{}", block.from, block.to))
            .expect("registered above");
        for &(a, b) in &block.edges {
            g.add_edge(lookup(a, block.from)?, lookup(b, block.to)?, et, 1.0)?;
        }
    }
    Ok(g)
}

/// Multiplex embedding: `n` shared nodes present in all `k` layers, one edge
/// type per layer, no inter-layer edges. `layer_edges[i]` holds weighted
/// edges of layer `i`; `layer_names` (if given) names the layers.
pub fn from_multiplex(
    n: u32,
    layer_edges: &[Vec<(u32, u32, f64)>],
    layer_names: Option<&[String]>,
) -> Result<Hmn, GraphError> {
    let k = layer_edges.len();
    if k == 0 {
        return Err(GraphError::Invalid("a multiplex network needs at least one layer".into()));
    }
    let names: Vec<String> = match layer_names {
        Some(names) if names.len() == k => names.to_vec(),
        Some(names) => {
            return Err(GraphError::Invalid(format!(
                "{} layer names given for {k} layers",
                names.len()
            )))
        }
        None => (1..=k).map(|i| i.to_string()).collect(),
    };
    let mut g = Hmn::with_types(false, vec![DEFAULT_TYPE_NAME.to_string()], names.clone())?;
    let layers: Vec<LayerId> = names
        .iter()
        .map(|name| g.add_layer(name))
        .collect::<Result<_, _>>()?;
    for _ in 0..n {
        g.add_node(NodeTypeId(0), &layers)?;
    }
    for (i, edges) in layer_edges.iter().enumerate() {
        for &(a, b, w) in edges {
            check_endpoint(a, n)?;
            check_endpoint(b, n)?;
            g.add_edge(
                LayeredNode::new(NodeId(a), layers[i]),
                LayeredNode::new(NodeId(b), layers[i]),
                EdgeTypeId(i as u32),
                w,
            )?;
        }
    }
    Ok(g)
}

fn check_endpoint(index: u32, count: u32) -> Result<(), GraphError> {
    if index >= count {
        Err(GraphError::EndpointOutOfRange { index, count })
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_embeds_as_one_layer() {
        let g = from_homogeneous(3, &[(0, 1), (1, 2), (0, 2)], false).unwrap();
        assert_eq!(g.layer_count(), 1);
        assert_eq!(g.edge_count(), 3);
        assert!(g.edges().iter().all(|e| e.is_intra()));
        assert_eq!(g.node_type_count(), 1);
        assert_eq!(g.edge_type_count(), 1);
    }

    #[test]
    fn empty_homogeneous_graph_keeps_its_layer() {
        let g = from_homogeneous(0, &[], false).unwrap();
        assert_eq!(g.layer_count(), 1);
        assert_eq!(g.node_count(), 0);
        g.validate().unwrap();
    }

    #[test]
    fn homogeneous_endpoint_out_of_range() {
        assert_eq!(
            from_homogeneous(2, &[(0, 2)], false),
            Err(GraphError::EndpointOutOfRange { index: 2, count: 2 })
        );
    }

    #[test]
    fn bipartite_author_paper() {
        let net = HeterogeneousNetwork {
            node_types: vec!["author".into(), "paper".into()],
            edge_types: vec!["writes".into()],
            node_type_of: vec![0, 0, 1, 1],
            edges: vec![(0, 2, 0), (1, 2, 0), (1, 3, 0)],
            directed: false,
        };
        let g = from_heterogeneous(&net).unwrap();
        assert_eq!(g.layer_count(), 1);
        assert_eq!(g.node_type_count(), 2);
        assert_eq!(g.r_vt(NodeId(3)).unwrap(), NodeTypeId(1));
        assert_eq!(g.edge_count(), 3);
    }

    #[test]
    fn single_typed_node() {
        let net = HeterogeneousNetwork {
            node_types: vec!["t".into()],
            edge_types: vec!["e".into()],
            node_type_of: vec![0],
            ..Default::default()
        };
        let g = from_heterogeneous(&net).unwrap();
        assert_eq!(g.node_count(), 1);
        assert_eq!(g.edge_count(), 0);
        assert_eq!(g.node_type_name(NodeTypeId(0)), Some("t"));
    }

    #[test]
    fn heterogeneous_undeclared_type_rejected() {
        let net = HeterogeneousNetwork {
            node_types: vec!["t".into()],
            edge_types: vec!["e".into()],
            node_type_of: vec![0, 1],
            ..Default::default()
        };
        assert!(matches!(
            from_heterogeneous(&net),
            Err(GraphError::UnknownNodeType(_))
        ));
        let net = HeterogeneousNetwork {
            node_types: vec!["t".into()],
            edge_types: vec!["e".into()],
            node_type_of: vec![0, 0],
            edges: vec![(0, 1, 3)],
            directed: false,
        };
        assert!(matches!(
            from_heterogeneous(&net),
            Err(GraphError::UnknownEdgeType(_))
        ));
    }

    #[test]
    fn two_layer_multilayered() {
        let net = MultilayerNetwork {
            layer_nodes: vec![vec![0, 1], vec![2, 3]],
            intra: vec![vec![(0, 1)], vec![(2, 3)]],
            inter: vec![InterLayerEdges {
                from: 0,
                to: 1,
                edges: vec![(0, 2)],
            }],
        };
        let g = from_multilayered(&net).unwrap();
        let intra = g.edges().iter().filter(|e| e.is_intra()).count();
        let inter = g.edges().iter().filter(|e| e.is_inter()).count();
        assert_eq!((intra, inter), (2, 1));
        assert_eq!(g.r_vt(NodeId(2)).unwrap(), NodeTypeId(1));
    }

    #[test]
    fn inter_block_on_same_layer_rejected() {
        let net = MultilayerNetwork {
            layer_nodes: vec![vec![0, 1]],
            intra: vec![vec![]],
            inter: vec![InterLayerEdges {
                from: 0,
                to: 0,
                edges: vec![(0, 1)],
            }],
        };
        assert_eq!(from_multilayered(&net), Err(GraphError::InterSameLayer(0)));
    }

    #[test]
    fn multiplex_two_layers() {
        let g = from_multiplex(2, &[vec![(0, 1, 1.0)], vec![(0, 1, 1.0)]], None).unwrap();
        assert_eq!(g.node_count(), 2);
        assert_eq!(g.r_vl(NodeId(0)).unwrap(), &[LayerId(0), LayerId(1)]);
        assert_eq!(g.r_vl(NodeId(1)).unwrap(), &[LayerId(0), LayerId(1)]);
        assert_eq!(g.edge_count(), 2);
        assert!(g.edges().iter().all(|e| e.is_intra()));
        assert_ne!(g.edges()[0].etype, g.edges()[1].etype);
    }

    #[test]
    fn multiplex_single_layer_and_range_check() {
        let g = from_multiplex(3, &[vec![(0, 2, 1.0)]], None).unwrap();
        assert_eq!(g.layer_count(), 1);
        assert!(from_multiplex(2, &[vec![(0, 5, 1.0)]], None).is_err());
    }
}
