use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::GraphError;
use crate::ingest::{CollaborationInstance, CollaborationKind};

/// Collaboration counts on one developer pair.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EdgeWeight {
    pub co_edition_count: u64,
    pub review_count: u64,
}

impl EdgeWeight {
    pub fn new(co_edition_count: u64, review_count: u64) -> Self {
        Self {
            co_edition_count,
            review_count,
        }
    }

    pub fn total(&self) -> u64 {
        self.co_edition_count + self.review_count
    }

    fn add(&mut self, other: EdgeWeight) {
        self.co_edition_count += other.co_edition_count;
        self.review_count += other.review_count;
    }
}

/// Undirected weighted developer network.
///
/// Nodes are indexed in lexicographic order of their identifiers; every
/// algorithm in the crate iterates nodes and neighbours in index order,
/// which makes results independent of input ordering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DevNetwork {
    names: Vec<String>,
    index: HashMap<String, usize>,
    /// Neighbour lists sorted by neighbour index.
    adjacency: Vec<Vec<(usize, EdgeWeight)>>,
    edge_count: usize,
}

impl DevNetwork {
    /// Builds a network from node identifiers and weighted edges. Repeated
    /// edges are summed; endpoints not listed in `nodes` are added.
    pub fn from_weighted_edges<N, E, S>(nodes: N, edges: E) -> Result<Self, GraphError>
    where
        N: IntoIterator<Item = S>,
        E: IntoIterator<Item = (S, S, EdgeWeight)>,
        S: Into<String>,
    {
        let mut names: BTreeSet<String> = nodes.into_iter().map(Into::into).collect();
        let mut merged: BTreeMap<(String, String), EdgeWeight> = BTreeMap::new();
        for (x, y, w) in edges {
            let (x, y) = (x.into(), y.into());
            if x == y {
                return Err(GraphError::SelfLoop(x));
            }
            if w.total() == 0 {
                return Err(GraphError::EmptyEdge(x, y));
            }
            let key = if x < y { (x, y) } else { (y, x) };
            names.insert(key.0.clone());
            names.insert(key.1.clone());
            merged.entry(key).or_default().add(w);
        }

        let names: Vec<String> = names.into_iter().collect();
        let index: HashMap<String, usize> = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), i))
            .collect();
        let mut adjacency = vec![Vec::new(); names.len()];
        for ((a, b), w) in &merged {
            let (ia, ib) = (index[a], index[b]);
            adjacency[ia].push((ib, *w));
            adjacency[ib].push((ia, *w));
        }
        for list in &mut adjacency {
            list.sort_by_key(|&(v, _)| v);
        }
        Ok(Self {
            names,
            index,
            adjacency,
            edge_count: merged.len(),
        })
    }

    /// Convenience constructor: every edge carries `total` co-edition counts.
    pub fn from_edge_list(nodes: &[&str], edges: &[(&str, &str, u64)]) -> Result<Self, GraphError> {
        Self::from_weighted_edges(
            nodes.iter().map(|s| s.to_string()),
            edges
                .iter()
                .map(|&(a, b, w)| (a.to_string(), b.to_string(), EdgeWeight::new(w, 0))),
        )
    }

    pub fn node_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// Node identifiers in index order.
    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, node: usize) -> &str {
        &self.names[node]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn neighbors(&self, node: usize) -> &[(usize, EdgeWeight)] {
        &self.adjacency[node]
    }

    pub fn degree(&self, node: usize) -> usize {
        self.adjacency[node].len()
    }

    /// Sum of total edge weights incident to `node`.
    pub fn strength(&self, node: usize) -> u64 {
        self.adjacency[node].iter().map(|(_, w)| w.total()).sum()
    }

    pub fn weight(&self, u: usize, v: usize) -> Option<EdgeWeight> {
        let list = &self.adjacency[u];
        list.binary_search_by_key(&v, |&(n, _)| n)
            .ok()
            .map(|pos| list[pos].1)
    }

    pub fn weight_by_name(&self, a: &str, b: &str) -> Option<EdgeWeight> {
        self.weight(self.index_of(a)?, self.index_of(b)?)
    }

    /// Edges as `(u, v, weight)` with `u < v`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, EdgeWeight)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(u, list)| {
            list.iter()
                .filter(move |&&(v, _)| u < v)
                .map(move |&(v, w)| (u, v, w))
        })
    }

    pub fn to_graph_file(&self) -> GraphFile {
        GraphFile {
            nodes: self.names.clone(),
            edges: self
                .edges()
                .map(|(u, v, w)| EdgeRecord {
                    a: self.names[u].clone(),
                    b: self.names[v].clone(),
                    co_edition: w.co_edition_count,
                    review: w.review_count,
                })
                .collect(),
        }
    }

    /// Canonical JSON form: sorted nodes, edges with `a < b` sorted by
    /// `(a, b)`, trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_graph_file())
            .expect("graph files always serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, GraphError> {
        let file: GraphFile = serde_json::from_str(text)?;
        file.into_network()
    }
}

/// On-disk graph representation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphFile {
    pub nodes: Vec<String>,
    pub edges: Vec<EdgeRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub a: String,
    pub b: String,
    pub co_edition: u64,
    pub review: u64,
}

impl GraphFile {
    pub fn into_network(self) -> Result<DevNetwork, GraphError> {
        let known: BTreeSet<&str> = self.nodes.iter().map(String::as_str).collect();
        if let Some(e) = self
            .edges
            .iter()
            .find(|e| !known.contains(e.a.as_str()) || !known.contains(e.b.as_str()))
        {
            let missing = if known.contains(e.a.as_str()) { &e.b } else { &e.a };
            return Err(GraphError::UnknownNode(missing.clone()));
        }
        DevNetwork::from_weighted_edges(
            self.nodes,
            self.edges
                .into_iter()
                .map(|e| (e.a, e.b, EdgeWeight::new(e.co_edition, e.review))),
        )
    }
}

/// Collapses collaboration instances into a network. Each instance adds one
/// to its pair's co-edition or review count.
pub fn build_network(instances: &[CollaborationInstance]) -> Result<DevNetwork, GraphError> {
    build_network_with_roster(instances, std::iter::empty::<String>())
}

/// Like [`build_network`], additionally adding every roster entry as a node
/// so developers without collaborations appear as isolates.
pub fn build_network_with_roster<I>(
    instances: &[CollaborationInstance],
    roster: I,
) -> Result<DevNetwork, GraphError>
where
    I: IntoIterator<Item = String>,
{
    let edges = instances.iter().map(|inst| {
        let w = match inst.kind {
            CollaborationKind::FileCoEdition => EdgeWeight::new(1, 0),
            CollaborationKind::AuthorReviewer => EdgeWeight::new(0, 1),
        };
        (inst.a.clone(), inst.b.clone(), w)
    });
    DevNetwork::from_weighted_edges(roster, edges)
}
