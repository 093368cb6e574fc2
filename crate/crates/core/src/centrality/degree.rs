use crate::graph::DevNetwork;

/// Fraction of the other nodes each node is adjacent to, `deg(v) / (n - 1)`.
/// All zeros when the network has fewer than two nodes.
pub fn degree_centrality(net: &DevNetwork) -> Vec<f64> {
    let n = net.node_count();
    if n < 2 {
        return vec![0.0; n];
    }
    let others = (n - 1) as f64;
    (0..n).map(|v| net.degree(v) as f64 / others).collect()
}

/// Weighted variant: total incident collaboration count over `n - 1`.
pub fn weighted_degree_centrality(net: &DevNetwork) -> Vec<f64> {
    let n = net.node_count();
    if n < 2 {
        return vec![0.0; n];
    }
    let others = (n - 1) as f64;
    (0..n).map(|v| net.strength(v) as f64 / others).collect()
}
