use std::collections::VecDeque;

use rayon::prelude::*;

use super::{DevNetwork, GraphError};

/// Connected components as sorted node-index lists, largest first; equal
/// sizes are ordered by their smallest member.
pub fn components(net: &DevNetwork) -> Vec<Vec<usize>> {
    let n = net.node_count();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut comp = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for &(v, _) in net.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    comp.push(v);
                    queue.push_back(v);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    // Components are discovered in order of their smallest member, so a
    // stable sort by size keeps that as the tie-break.
    out.sort_by_key(|c| std::cmp::Reverse(c.len()));
    out
}

pub fn density(net: &DevNetwork) -> f64 {
    let n = net.node_count() as f64;
    if net.node_count() < 2 {
        return 0.0;
    }
    2.0 * net.edge_count() as f64 / (n * (n - 1.0))
}

/// Unweighted local clustering coefficient of one node.
pub fn local_clustering(net: &DevNetwork, node: usize) -> f64 {
    let nbrs = net.neighbors(node);
    let deg = nbrs.len();
    if deg < 2 {
        return 0.0;
    }
    let mut links = 0usize;
    for (i, &(u, _)) in nbrs.iter().enumerate() {
        for &(v, _) in &nbrs[i + 1..] {
            if net.weight(u, v).is_some() {
                links += 1;
            }
        }
    }
    links as f64 / (deg * (deg - 1) / 2) as f64
}

/// Mean local clustering coefficient over all nodes (0 for an empty graph).
pub fn avg_clustering(net: &DevNetwork) -> f64 {
    let n = net.node_count();
    if n == 0 {
        return 0.0;
    }
    let sum: f64 = (0..n).map(|v| local_clustering(net, v)).sum();
    sum / n as f64
}

/// Unweighted hop distances from `source`; `None` for unreachable nodes.
pub fn hop_distances(net: &DevNetwork, source: usize) -> Vec<Option<u32>> {
    let mut dist = vec![None; net.node_count()];
    dist[source] = Some(0);
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        let du = dist[u].expect("queued nodes have distances");
        for &(v, _) in net.neighbors(u) {
            if dist[v].is_none() {
                dist[v] = Some(du + 1);
                queue.push_back(v);
            }
        }
    }
    dist
}

/// Mean hop distance over all unordered pairs of `within`, which must be a
/// connected node set of at least two nodes.
pub fn avg_shortest_path_hops(net: &DevNetwork, within: &[usize]) -> Result<f64, GraphError> {
    let k = within.len();
    if k < 2 {
        return Err(GraphError::Undefined(format!(
            "average shortest path needs at least 2 nodes, got {k}"
        )));
    }
    let per_source: Vec<Option<u64>> = within
        .par_iter()
        .map(|&s| {
            let dist = hop_distances(net, s);
            within
                .iter()
                .map(|&t| dist[t].map(u64::from))
                .sum::<Option<u64>>()
        })
        .collect();
    let total = per_source
        .into_iter()
        .sum::<Option<u64>>()
        .ok_or_else(|| GraphError::Undefined("node set is not connected".to_string()))?;
    // Every unordered pair was counted from both ends.
    Ok(total as f64 / (k * (k - 1)) as f64)
}
