//! Heterogeneous multi-layered networks (HMNs).
//!
//! An HMN is a graph whose nodes live in one or more layers and whose nodes
//! and edges carry types. This crate provides the data structure, scoped
//! structural measures, embeddings of simpler network classes, a seeded
//! preferential-attachment generator and text serialization.

pub mod embed;
pub mod generate;
pub mod graph;
pub mod io;
pub mod metrics;

pub use embed::{
    from_heterogeneous, from_homogeneous, from_homogeneous_weighted, from_multilayered,
    from_multiplex, HeterogeneousNetwork, InterLayerEdges, MultilayerNetwork,
};
pub use graph::{
    induced_subhmn, sorted_edges, Edge, EdgeTypeId, GraphError, Hmn, LayerId, LayeredNode,
    NodeId, NodeTypeId, DEFAULT_TYPE_NAME,
};
pub use metrics::{MetricError, MetricScope};
