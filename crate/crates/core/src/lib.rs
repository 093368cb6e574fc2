//! Developer collaboration networks and centrality-based trust ratings.
//!
//! The crate is organised as a pipeline:
//!
//! 1. [`ingest`] parses commit and pull-request event records and derives
//!    dated collaboration instances (file co-edition and author/reviewer).
//! 2. [`graph`] collapses instances into an undirected weighted
//!    [`DevNetwork`](graph::DevNetwork) and computes structural statistics
//!    and Louvain communities.
//! 3. [`centrality`] computes five centrality measures and aggregates them
//!    into a single rating in `[0, 1]`.
//! 4. [`survey`], [`fixture`] and [`pipeline`] cover survey-target
//!    sampling, synthetic corpora and end-to-end orchestration.

pub mod centrality;
pub mod fixture;
pub mod graph;
pub mod ingest;
pub mod pipeline;
pub mod survey;

pub use centrality::{CentralityVector, DistanceMode, RatingTable};
pub use graph::{DevNetwork, EdgeWeight, NetworkStats};
pub use ingest::{CollaborationInstance, EventRecord};

/// Default RNG seed used by every seeded operation.
pub const DEFAULT_SEED: u64 = 42;
