use rayon::prelude::*;

use super::paths::shortest_paths;
use super::DistanceMode;
use crate::graph::DevNetwork;

/// Closeness centrality on weighted shortest paths, with the
/// Wasserman-Faust correction for disconnected graphs:
/// `r / sum(d) * r / (n - 1)` where `r` counts nodes reachable from `v`.
/// Isolates score 0.
pub fn closeness_centrality(net: &DevNetwork, mode: DistanceMode) -> Vec<f64> {
    let n = net.node_count();
    if n < 2 {
        return vec![0.0; n];
    }
    (0..n)
        .into_par_iter()
        .map(|v| {
            let sp = shortest_paths(net, v, mode);
            let mut reachable = 0usize;
            let mut total = 0.0;
            for (u, &d) in sp.dist.iter().enumerate() {
                if u != v && d.is_finite() {
                    reachable += 1;
                    total += d;
                }
            }
            if reachable == 0 || total <= 0.0 {
                return 0.0;
            }
            let r = reachable as f64;
            (r / total) * (r / (n - 1) as f64)
        })
        .collect()
}
