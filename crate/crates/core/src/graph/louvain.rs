//! Louvain modularity optimisation (resolution 1.0) on total edge weights.
//!
//! Each level runs the local-moving phase over a seeded shuffle of the
//! current (super)nodes, then contracts communities into supernodes. The
//! process stops when a level moves no node. The only source of
//! randomness is the per-level visiting order.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::DevNetwork;

/// Minimum gain (in edge-weight units) for a move; keeps rounding noise in
/// the running community totals from producing endless swaps.
const MOVE_EPSILON: f64 = 1e-10;

/// Weighted graph used between levels. `self_loops[i]` holds the internal
/// weight of supernode `i`, counted once.
struct Level {
    adjacency: Vec<Vec<(usize, f64)>>,
    self_loops: Vec<f64>,
}

impl Level {
    fn from_network(net: &DevNetwork) -> Self {
        let adjacency = (0..net.node_count())
            .map(|u| {
                net.neighbors(u)
                    .iter()
                    .map(|&(v, w)| (v, w.total() as f64))
                    .collect()
            })
            .collect();
        Self {
            adjacency,
            self_loops: vec![0.0; net.node_count()],
        }
    }

    fn len(&self) -> usize {
        self.adjacency.len()
    }

    /// Node strength with the self-loop counted twice.
    fn strength(&self, u: usize) -> f64 {
        self.adjacency[u].iter().map(|&(_, w)| w).sum::<f64>() + 2.0 * self.self_loops[u]
    }

    /// Local moving phase. Returns the community of each node (dense labels
    /// in order of first appearance) and whether any node moved.
    fn local_moves(&self, rng: &mut ChaCha8Rng) -> (Vec<usize>, bool) {
        let n = self.len();
        let strength: Vec<f64> = (0..n).map(|u| self.strength(u)).collect();
        let two_m: f64 = strength.iter().sum();
        let mut community: Vec<usize> = (0..n).collect();
        if two_m == 0.0 {
            return (community, false);
        }
        let mut sigma_tot = strength.clone();

        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);

        // Scratch: weight from the current node to each neighbouring community.
        let mut link = vec![0.0f64; n];
        let mut marked = vec![false; n];
        let mut touched: Vec<usize> = Vec::new();
        let mut any_move = false;

        loop {
            let mut moved = false;
            for &u in &order {
                let own = community[u];
                let k_u = strength[u];

                touched.clear();
                touched.push(own);
                marked[own] = true;
                for &(v, w) in &self.adjacency[u] {
                    let c = community[v];
                    if !marked[c] {
                        marked[c] = true;
                        touched.push(c);
                    }
                    link[c] += w;
                }

                sigma_tot[own] -= k_u;
                let gain = |c: usize, link_c: f64| link_c - sigma_tot[c] * k_u / two_m;
                let mut best = own;
                let mut best_gain = gain(own, link[own]);
                for &c in &touched[1..] {
                    let g = gain(c, link[c]);
                    if g > best_gain + MOVE_EPSILON {
                        best = c;
                        best_gain = g;
                    }
                }
                sigma_tot[best] += k_u;
                if best != own {
                    community[u] = best;
                    moved = true;
                }
                for &c in &touched {
                    link[c] = 0.0;
                    marked[c] = false;
                }
            }
            if !moved {
                break;
            }
            any_move = true;
        }
        (relabel(&community), any_move)
    }

    fn aggregate(&self, community: &[usize]) -> Level {
        let k = community.iter().max().map_or(0, |&c| c + 1);
        let mut self_loops = vec![0.0; k];
        let mut weights: Vec<std::collections::BTreeMap<usize, f64>> = vec![Default::default(); k];
        for u in 0..self.len() {
            let cu = community[u];
            self_loops[cu] += self.self_loops[u];
            for &(v, w) in &self.adjacency[u] {
                let cv = community[v];
                if cu == cv {
                    // Each internal edge is seen from both endpoints.
                    if u < v {
                        self_loops[cu] += w;
                    }
                } else {
                    *weights[cu].entry(cv).or_insert(0.0) += w;
                }
            }
        }
        Level {
            adjacency: weights.into_iter().map(|m| m.into_iter().collect()).collect(),
            self_loops,
        }
    }
}

fn relabel(community: &[usize]) -> Vec<usize> {
    let mut map = vec![usize::MAX; community.len()];
    let mut next = 0;
    community
        .iter()
        .map(|&c| {
            if map[c] == usize::MAX {
                map[c] = next;
                next += 1;
            }
            map[c]
        })
        .collect()
}

/// Louvain communities as sorted node-index lists, largest first, ties
/// ordered by smallest member. Deterministic for a given seed.
pub fn louvain_communities(net: &DevNetwork, seed: u64) -> Vec<Vec<usize>> {
    let n = net.node_count();
    if n == 0 {
        return Vec::new();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // membership[original node] = current supernode
    let mut membership: Vec<usize> = (0..n).collect();
    let mut level = Level::from_network(net);
    loop {
        let (community, moved) = level.local_moves(&mut rng);
        if !moved {
            break;
        }
        for m in membership.iter_mut() {
            *m = community[*m];
        }
        level = level.aggregate(&community);
    }
    group(&membership)
}

fn group(membership: &[usize]) -> Vec<Vec<usize>> {
    let k = membership.iter().max().map_or(0, |&c| c + 1);
    let mut out = vec![Vec::new(); k];
    for (node, &c) in membership.iter().enumerate() {
        out[c].push(node);
    }
    out.retain(|c| !c.is_empty());
    out.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
    out
}

/// Weighted modularity (resolution 1.0) of a partition given as node-index
/// lists. Nodes missing from every list are treated as singletons.
pub fn modularity(net: &DevNetwork, communities: &[Vec<usize>]) -> f64 {
    let n = net.node_count();
    let mut label = vec![usize::MAX; n];
    for (c, members) in communities.iter().enumerate() {
        for &v in members {
            label[v] = c;
        }
    }
    let mut next = communities.len();
    for l in label.iter_mut().filter(|l| **l == usize::MAX) {
        *l = next;
        next += 1;
    }

    let m: f64 = net.edges().map(|(_, _, w)| w.total() as f64).sum();
    if m == 0.0 {
        return 0.0;
    }
    let mut internal = vec![0.0; next];
    let mut degree = vec![0.0; next];
    for (u, v, w) in net.edges() {
        let w = w.total() as f64;
        degree[label[u]] += w;
        degree[label[v]] += w;
        if label[u] == label[v] {
            internal[label[u]] += w;
        }
    }
    internal
        .iter()
        .zip(&degree)
        .map(|(l, d)| l / m - (d / (2.0 * m)).powi(2))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn two_cliques() -> DevNetwork {
        let a = ["a1", "a2", "a3", "a4"];
        let b = ["b1", "b2", "b3", "b4"];
        let mut edges = Vec::new();
        for group in [a, b] {
            for i in 0..4 {
                for j in i + 1..4 {
                    edges.push((group[i], group[j], 1));
                }
            }
        }
        edges.push(("a4", "b1", 1));
        DevNetwork::from_edge_list(&[], &edges).unwrap()
    }

    #[test]
    fn empty_network() {
        let net = DevNetwork::from_edge_list(&[], &[]).unwrap();
        assert!(louvain_communities(&net, 42).is_empty());
    }

    #[test]
    fn isolates_are_singletons() {
        let net = DevNetwork::from_edge_list(&["x", "y"], &[]).unwrap();
        assert_eq!(louvain_communities(&net, 1), vec![vec![0], vec![1]]);
    }

    #[test]
    fn bridged_cliques_split() {
        let net = two_cliques();
        for seed in 0..10 {
            let comms = louvain_communities(&net, seed);
            assert_eq!(comms, vec![vec![0, 1, 2, 3], vec![4, 5, 6, 7]], "seed {seed}");
        }
    }

    #[test]
    fn modularity_known_values() {
        let net = two_cliques();
        assert!(modularity(&net, &[(0..8).collect()]).abs() < 1e-15);
        // m = 13; each clique has 6 internal edges and degree 13.
        let q = modularity(&net, &[vec![0, 1, 2, 3], vec![4, 5, 6, 7]]);
        let expected = 2.0 * (6.0 / 13.0 - 0.25);
        assert!((q - expected).abs() < 1e-15);
    }

    #[test]
    fn weights_change_the_split() {
        // Heavy a-b and c-d edges, light links across.
        let net = DevNetwork::from_edge_list(
            &[],
            &[("a", "b", 10), ("c", "d", 10), ("a", "c", 1), ("b", "d", 1)],
        )
        .unwrap();
        assert_eq!(louvain_communities(&net, 7), vec![vec![0, 1], vec![2, 3]]);
    }
}
