//! The developer network and its structural statistics.

mod louvain;
mod network;
mod stats;
mod structure;

use thiserror::Error;

pub use louvain::{louvain_communities, modularity};
pub use network::{build_network, build_network_with_roster, DevNetwork, EdgeRecord, EdgeWeight, GraphFile};
pub use stats::{stats, ComponentStats, NetworkStats, LARGE_COMMUNITY_SIZE};
pub use structure::{
    avg_clustering, avg_shortest_path_hops, components, density, hop_distances, local_clustering,
};

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("self-collaboration recorded for {0}")]
    SelfLoop(String),
    #[error("edge {0}--{1} has zero collaborations")]
    EmptyEdge(String, String),
    #[error("edge endpoint {0} is not a listed node")]
    UnknownNode(String),
    #[error("undefined: {0}")]
    Undefined(String),
    #[error("invalid graph file: {0}")]
    Json(#[from] serde_json::Error),
}
