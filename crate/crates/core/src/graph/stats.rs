use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::louvain::louvain_communities;
use super::structure::{avg_clustering, avg_shortest_path_hops, components, density};
use super::DevNetwork;

/// Communities with at least this many members count as large.
pub const LARGE_COMMUNITY_SIZE: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentStats {
    pub node_count: usize,
    pub edge_count: usize,
    /// `None` when the component has fewer than two nodes.
    pub avg_shortest_path_hops: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkStats {
    pub node_count: usize,
    pub edge_count: usize,
    pub component_count: usize,
    pub isolate_count: usize,
    pub density: f64,
    pub avg_clustering: f64,
    pub largest_component: ComponentStats,
    pub community_count: usize,
    pub large_community_count: usize,
}

pub fn stats(net: &DevNetwork, seed: u64) -> NetworkStats {
    let comps = components(net);
    let isolate_count = (0..net.node_count()).filter(|&v| net.degree(v) == 0).count();
    let largest_component = match comps.first() {
        None => ComponentStats {
            node_count: 0,
            edge_count: 0,
            avg_shortest_path_hops: None,
        },
        Some(c) => {
            let mut member = vec![false; net.node_count()];
            for &v in c {
                member[v] = true;
            }
            let edge_count = net.edges().filter(|&(u, _, _)| member[u]).count();
            ComponentStats {
                node_count: c.len(),
                edge_count,
                avg_shortest_path_hops: avg_shortest_path_hops(net, c).ok(),
            }
        }
    };
    let communities = louvain_communities(net, seed);
    NetworkStats {
        node_count: net.node_count(),
        edge_count: net.edge_count(),
        component_count: comps.len(),
        isolate_count,
        density: density(net),
        avg_clustering: avg_clustering(net),
        largest_component,
        community_count: communities.len(),
        large_community_count: communities
            .iter()
            .filter(|c| c.len() >= LARGE_COMMUNITY_SIZE)
            .count(),
    }
}

impl NetworkStats {
    /// Two-column plain-text rendering.
    pub fn to_table(&self) -> String {
        let asp = self
            .largest_component
            .avg_shortest_path_hops
            .map_or_else(|| "undefined".to_string(), |v| format!("{v:.3}"));
        let rows = [
            ("Nodes", self.node_count.to_string()),
            ("Edges", self.edge_count.to_string()),
            ("Connected components", self.component_count.to_string()),
            ("Isolates", self.isolate_count.to_string()),
            ("Density", format!("{:.6}", self.density)),
            ("Avg. clustering coefficient", format!("{:.3}", self.avg_clustering)),
            ("Largest component nodes", self.largest_component.node_count.to_string()),
            ("Largest component edges", self.largest_component.edge_count.to_string()),
            ("Avg. shortest path length", asp),
            ("Communities", self.community_count.to_string()),
            (
                "Communities with >= 100 members",
                self.large_community_count.to_string(),
            ),
        ];
        let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        let mut out = String::new();
        for (k, v) in rows {
            let _ = writeln!(out, "{k:<width$}  {v}");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_graph() {
        let names = ["a", "b", "c", "d", "e"];
        let mut edges = Vec::new();
        for i in 0..5 {
            for j in i + 1..5 {
                edges.push((names[i], names[j], 1));
            }
        }
        let s = stats(&DevNetwork::from_edge_list(&[], &edges).unwrap(), 42);
        assert_eq!(s.density, 1.0);
        assert_eq!(s.avg_clustering, 1.0);
        assert_eq!(s.component_count, 1);
        assert_eq!(s.isolate_count, 0);
        assert_eq!(s.largest_component.avg_shortest_path_hops, Some(1.0));
        assert_eq!(s.largest_component.edge_count, 10);
    }

    #[test]
    fn edgeless_graph() {
        let net = DevNetwork::from_edge_list(&["a", "b", "c", "d"], &[]).unwrap();
        let s = stats(&net, 42);
        assert_eq!(s.density, 0.0);
        assert_eq!(s.isolate_count, 4);
        assert_eq!(s.component_count, 4);
        assert_eq!(s.community_count, 4);
        assert_eq!(s.largest_component.avg_shortest_path_hops, None);
        assert!(s.to_table().contains("undefined"));
    }

    #[test]
    fn empty_graph() {
        let s = stats(&DevNetwork::from_edge_list(&[], &[]).unwrap(), 1);
        assert_eq!(s.node_count, 0);
        assert_eq!(s.community_count, 0);
    }
}
