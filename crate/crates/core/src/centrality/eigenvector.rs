use log::warn;

use super::CentralityError;
use crate::graph::{components, DevNetwork};

pub const EIGENVECTOR_MAX_ITER: usize = 1000;
pub const EIGENVECTOR_TOL: f64 = 1e-6;

/// Eigenvector centrality of the weighted adjacency matrix, computed by
/// power iteration on the largest connected component. Nodes outside that
/// component score 0. When several components tie for largest, the one
/// containing the lexicographically smallest developer is used.
///
/// Iteration uses `A + I`, which has the same dominant eigenvector as `A`
/// but no `-lambda` eigenvalue, so bipartite components (stars, paths)
/// converge instead of oscillating.
pub fn eigenvector_centrality(net: &DevNetwork) -> Result<Vec<f64>, CentralityError> {
    let n = net.node_count();
    let mut out = vec![0.0; n];
    let comps = components(net);
    let Some(largest) = comps.first().filter(|c| c.len() >= 2) else {
        if n > 0 {
            warn!("network has no edges; eigenvector centrality is zero everywhere");
        }
        return Ok(out);
    };

    let k = largest.len();
    let mut local = vec![usize::MAX; n];
    for (i, &v) in largest.iter().enumerate() {
        local[v] = i;
    }
    let adjacency: Vec<Vec<(usize, f64)>> = largest
        .iter()
        .map(|&v| {
            net.neighbors(v)
                .iter()
                .map(|&(u, w)| (local[u], w.total() as f64))
                .collect()
        })
        .collect();

    let tol = EIGENVECTOR_TOL / k as f64;
    let mut x = vec![1.0 / (k as f64).sqrt(); k];
    let mut next = vec![0.0; k];
    for _ in 0..EIGENVECTOR_MAX_ITER {
        for (i, nbrs) in adjacency.iter().enumerate() {
            next[i] = x[i] + nbrs.iter().map(|&(j, w)| w * x[j]).sum::<f64>();
        }
        let norm = next.iter().map(|v| v * v).sum::<f64>().sqrt();
        next.iter_mut().for_each(|v| *v /= norm);
        let change = x
            .iter()
            .zip(&next)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        std::mem::swap(&mut x, &mut next);
        if change < tol {
            for (i, &v) in largest.iter().enumerate() {
                out[v] = x[i];
            }
            return Ok(out);
        }
    }
    Err(CentralityError::NotConverged {
        measure: "eigenvector",
        iterations: EIGENVECTOR_MAX_ITER,
        residual: None,
    })
}
