use super::CentralityError;
use crate::graph::DevNetwork;

pub const PAGERANK_DAMPING: f64 = 0.85;
pub const PAGERANK_MAX_ITER: usize = 200;
pub const PAGERANK_TOL: f64 = 1e-8;

/// Weighted PageRank with uniform teleportation. Nodes without edges spread
/// their mass uniformly. Iterates until the L1 change drops below
/// [`PAGERANK_TOL`]; the result sums to 1.
pub fn pagerank(net: &DevNetwork) -> Result<Vec<f64>, CentralityError> {
    let n = net.node_count();
    if n == 0 {
        return Ok(Vec::new());
    }
    let nf = n as f64;
    let strength: Vec<f64> = (0..n).map(|v| net.strength(v) as f64).collect();
    let mut x = vec![1.0 / nf; n];
    let mut next = vec![0.0; n];
    let mut residual = f64::INFINITY;

    for _ in 0..PAGERANK_MAX_ITER {
        let dangling: f64 = (0..n).filter(|&v| strength[v] == 0.0).map(|v| x[v]).sum();
        let base = (1.0 - PAGERANK_DAMPING) / nf + PAGERANK_DAMPING * dangling / nf;
        for (v, slot) in next.iter_mut().enumerate() {
            let inflow: f64 = net
                .neighbors(v)
                .iter()
                .map(|&(u, w)| x[u] * w.total() as f64 / strength[u])
                .sum();
            *slot = base + PAGERANK_DAMPING * inflow;
        }
        residual = x.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
        std::mem::swap(&mut x, &mut next);
        if residual < PAGERANK_TOL {
            let total: f64 = x.iter().sum();
            x.iter_mut().for_each(|v| *v /= total);
            return Ok(x);
        }
    }
    Err(CentralityError::NotConverged {
        measure: "pagerank",
        iterations: PAGERANK_MAX_ITER,
        residual: Some(residual),
    })
}
