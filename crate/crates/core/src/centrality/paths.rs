use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::DistanceMode;
use crate::graph::DevNetwork;

/// Relative tolerance under which two path lengths count as equal. Path
/// lengths are sums of `1/weight` terms, so exact float equality would miss
/// genuinely tied shortest paths.
const TIE_TOLERANCE: f64 = 1e-12;

pub(crate) fn approx_eq(a: f64, b: f64) -> bool {
    (a - b).abs() <= TIE_TOLERANCE * a.abs().max(b.abs()).max(1.0)
}

/// Single-source shortest paths with path counts and predecessor lists.
pub(crate) struct ShortestPaths {
    pub dist: Vec<f64>,
    /// Number of shortest paths from the source.
    pub sigma: Vec<f64>,
    pub preds: Vec<Vec<usize>>,
    /// Settled nodes in nondecreasing distance order (source first).
    pub order: Vec<usize>,
}

#[derive(Copy, Clone, PartialEq)]
struct Entry {
    dist: f64,
    node: usize,
}

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        // Min-heap on (dist, node).
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Dijkstra from `source` with edge lengths given by `mode`.
pub(crate) fn shortest_paths(net: &DevNetwork, source: usize, mode: DistanceMode) -> ShortestPaths {
    let n = net.node_count();
    let mut dist = vec![f64::INFINITY; n];
    let mut sigma = vec![0.0; n];
    let mut preds = vec![Vec::new(); n];
    let mut settled = vec![false; n];
    let mut order = Vec::new();

    dist[source] = 0.0;
    sigma[source] = 1.0;
    let mut heap = BinaryHeap::from([Entry {
        dist: 0.0,
        node: source,
    }]);
    while let Some(Entry { dist: d, node: u }) = heap.pop() {
        if settled[u] || d > dist[u] {
            continue;
        }
        settled[u] = true;
        order.push(u);
        for &(v, w) in net.neighbors(u) {
            if settled[v] {
                continue;
            }
            let alt = d + mode.length(w.total());
            if dist[v].is_finite() && approx_eq(alt, dist[v]) {
                sigma[v] += sigma[u];
                preds[v].push(u);
            } else if alt < dist[v] {
                dist[v] = alt;
                sigma[v] = sigma[u];
                preds[v].clear();
                preds[v].push(u);
                heap.push(Entry { dist: alt, node: v });
            }
        }
    }
    ShortestPaths {
        dist,
        sigma,
        preds,
        order,
    }
}
