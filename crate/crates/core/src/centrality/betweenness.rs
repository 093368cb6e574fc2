use rayon::prelude::*;

use super::paths::shortest_paths;
use super::DistanceMode;
use crate::graph::DevNetwork;

/// Sources are processed in fixed-size blocks; partial sums are combined in
/// block order so the result does not depend on the thread count.
const SOURCE_BLOCK: usize = 32;

/// Brandes betweenness on weighted shortest paths, normalised by
/// `2 / ((n - 1)(n - 2))` over unordered pairs. Zero for `n < 3`.
pub fn betweenness_centrality(net: &DevNetwork, mode: DistanceMode) -> Vec<f64> {
    let n = net.node_count();
    if n < 3 {
        return vec![0.0; n];
    }
    let sources: Vec<usize> = (0..n).collect();
    let partials: Vec<Vec<f64>> = sources
        .par_chunks(SOURCE_BLOCK)
        .map(|block| {
            let mut acc = vec![0.0; n];
            let mut delta = vec![0.0; n];
            for &s in block {
                accumulate(net, s, mode, &mut acc, &mut delta);
            }
            acc
        })
        .collect();

    let mut total = vec![0.0; n];
    for part in partials {
        for (t, p) in total.iter_mut().zip(part) {
            *t += p;
        }
    }
    // Each unordered pair was visited from both endpoints.
    let scale = 1.0 / ((n - 1) * (n - 2)) as f64;
    total.iter_mut().for_each(|b| *b *= scale);
    total
}

fn accumulate(net: &DevNetwork, s: usize, mode: DistanceMode, acc: &mut [f64], delta: &mut [f64]) {
    let sp = shortest_paths(net, s, mode);
    for &v in &sp.order {
        delta[v] = 0.0;
    }
    for &w in sp.order.iter().rev() {
        let coeff = (1.0 + delta[w]) / sp.sigma[w];
        for &v in &sp.preds[w] {
            delta[v] += sp.sigma[v] * coeff;
        }
        if w != s {
            acc[w] += delta[w];
        }
    }
}
