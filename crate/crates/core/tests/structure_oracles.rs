use devrank::graph::{
    avg_clustering, avg_shortest_path_hops, components, density, hop_distances, local_clustering,
    louvain_communities, modularity, stats, DevNetwork,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_graph(seed: u64, p: f64) -> (DevNetwork, Vec<Vec<u64>>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(2..=10);
    let names: Vec<String> = (0..n).map(|i| format!("n{i}")).collect();
    let mut w = vec![vec![0u64; n]; n];
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(p) {
                let x = rng.random_range(1..=5);
                w[i][j] = x;
                w[j][i] = x;
                edges.push((names[i].as_str(), names[j].as_str(), x));
            }
        }
    }
    let nodes: Vec<&str> = names.iter().map(String::as_str).collect();
    (DevNetwork::from_edge_list(&nodes, &edges).unwrap(), w)
}

fn floyd_warshall(w: &[Vec<u64>]) -> Vec<Vec<Option<u32>>> {
    let n = w.len();
    let mut d: Vec<Vec<Option<u32>>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| match (i == j, w[i][j] > 0) {
                    (true, _) => Some(0),
                    (false, true) => Some(1),
                    _ => None,
                })
                .collect()
        })
        .collect();
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if let (Some(a), Some(b)) = (d[i][k], d[k][j]) {
                    if d[i][j].is_none_or(|c| a + b < c) {
                        d[i][j] = Some(a + b);
                    }
                }
            }
        }
    }
    d
}

fn complete(names: &[&'static str]) -> Vec<(&'static str, &'static str, u64)> {
    let mut e = Vec::new();
    for i in 0..names.len() {
        for j in i + 1..names.len() {
            e.push((names[i], names[j], 1));
        }
    }
    e
}

fn two_k4_bridge() -> DevNetwork {
    let mut edges = complete(&["a", "b", "c", "d"]);
    edges.extend(complete(&["e", "f", "g", "h"]));
    edges.push(("d", "e", 1));
    DevNetwork::from_edge_list(&[], &edges).unwrap()
}

#[test]
fn k5_closed_form() {
    let net = DevNetwork::from_edge_list(&[], &complete(&["a", "b", "c", "d", "e"])).unwrap();
    assert_eq!(density(&net), 1.0);
    assert_eq!(avg_clustering(&net), 1.0);
    let all: Vec<usize> = (0..5).collect();
    assert_eq!(avg_shortest_path_hops(&net, &all).unwrap(), 1.0);
    let s = stats(&net, 1);
    assert_eq!(s.largest_component.avg_shortest_path_hops, Some(1.0));
    assert_eq!(s.isolate_count, 0);
}

#[test]
fn hop_distances_match_floyd_warshall() {
    for seed in 0..200 {
        let (net, w) = random_graph(seed, 0.35);
        let fw = floyd_warshall(&w);
        for (s, row) in fw.iter().enumerate() {
            assert_eq!(&hop_distances(&net, s), row, "seed {seed} source {s}");
        }
    }
}

#[test]
fn components_density_and_asp_match_floyd_warshall() {
    for seed in 0..200 {
        let (net, w) = random_graph(seed, 0.3);
        let n = w.len();
        let fw = floyd_warshall(&w);
        let comps = components(&net);
        let total: usize = comps.iter().map(Vec::len).sum();
        assert_eq!(total, n);
        for c in &comps {
            for &u in c {
                for v in 0..n {
                    assert_eq!(fw[u][v].is_some(), c.contains(&v));
                }
            }
        }
        let edges = w.iter().flatten().filter(|&&x| x > 0).count() / 2;
        let want = 2.0 * edges as f64 / (n * (n - 1)) as f64;
        assert!((density(&net) - want).abs() < 1e-15);

        let big = &comps[0];
        if big.len() >= 2 {
            let mut sum = 0u64;
            for &u in big {
                for &v in big {
                    sum += u64::from(fw[u][v].unwrap());
                }
            }
            let pairs = (big.len() * (big.len() - 1)) as f64;
            let got = avg_shortest_path_hops(&net, big).unwrap();
            assert!((got - sum as f64 / pairs).abs() < 1e-12, "seed {seed}");
        }
    }
}

#[test]
fn asp_rejects_disconnected_sets() {
    let net = DevNetwork::from_edge_list(&["x"], &[("a", "b", 1)]).unwrap();
    assert!(avg_shortest_path_hops(&net, &[0, 1, 2]).is_err());
    assert!(avg_shortest_path_hops(&net, &[0]).is_err());
}

#[test]
fn clustering_matches_triangle_count() {
    for seed in 0..200 {
        let (net, w) = random_graph(seed, 0.5);
        let n = w.len();
        let mut sum = 0.0;
        for v in 0..n {
            let nb: Vec<usize> = (0..n).filter(|&u| w[v][u] > 0).collect();
            let k = nb.len();
            let mut tri = 0;
            for a in 0..n {
                for b in a + 1..n {
                    if w[v][a] > 0 && w[v][b] > 0 && w[a][b] > 0 {
                        tri += 1;
                    }
                }
            }
            let want = if k < 2 {
                0.0
            } else {
                2.0 * tri as f64 / (k * (k - 1)) as f64
            };
            assert!((local_clustering(&net, v) - want).abs() < 1e-15);
            sum += want;
        }
        assert!((avg_clustering(&net) - sum / n as f64).abs() < 1e-12);
    }
}

fn oracle_modularity(w: &[Vec<u64>], label: &[usize]) -> f64 {
    let n = w.len();
    let k: Vec<f64> = w.iter().map(|r| r.iter().sum::<u64>() as f64).collect();
    let two_m: f64 = k.iter().sum();
    if two_m == 0.0 {
        return 0.0;
    }
    let mut q = 0.0;
    for i in 0..n {
        for j in 0..n {
            if label[i] == label[j] {
                q += w[i][j] as f64 - k[i] * k[j] / two_m;
            }
        }
    }
    q / two_m
}

#[test]
fn modularity_matches_matrix_formula() {
    for seed in 0..100 {
        let (net, w) = random_graph(seed, 0.5);
        let n = w.len();
        let mut rng = ChaCha8Rng::seed_from_u64(seed + 1000);
        let label: Vec<usize> = (0..n).map(|_| rng.random_range(0..3)).collect();
        let groups: Vec<Vec<usize>> = (0..3)
            .map(|c| (0..n).filter(|&v| label[v] == c).collect())
            .collect();
        let got = modularity(&net, &groups);
        assert!((got - oracle_modularity(&w, &label)).abs() < 1e-12);
    }
}

#[test]
fn bridged_cliques_split_for_every_seed() {
    let net = two_k4_bridge();
    let n = net.node_count();
    let w: Vec<Vec<u64>> = (0..n)
        .map(|u| (0..n).map(|v| net.weight(u, v).map_or(0, |x| x.total())).collect())
        .collect();
    // Best 2-partition by exhaustive enumeration.
    let mut best = (f64::MIN, 0u32);
    for mask in 1..(1u32 << (n - 1)) {
        let label: Vec<usize> = (0..n).map(|v| ((mask >> v) & 1) as usize).collect();
        let q = oracle_modularity(&w, &label);
        if q > best.0 {
            best = (q, mask);
        }
    }
    let want: Vec<Vec<usize>> = vec![
        (0..n).filter(|&v| (best.1 >> v) & 1 == 0).collect(),
        (0..n).filter(|&v| (best.1 >> v) & 1 == 1).collect(),
    ];
    let mut want_sorted = want.clone();
    want_sorted.sort();
    assert_eq!(want_sorted, vec![vec![0, 1, 2, 3], vec![4, 5, 6, 7]]);

    for seed in 0..=20 {
        let mut got = louvain_communities(&net, seed);
        got.sort();
        assert_eq!(got, want_sorted, "seed {seed}");
        assert!((modularity(&net, &got) - best.0).abs() < 1e-12);
    }
}

#[test]
fn louvain_never_worse_than_singletons() {
    for seed in 0..100 {
        let (net, _) = random_graph(seed, 0.4);
        let comms = louvain_communities(&net, seed);
        let mut seen: Vec<usize> = comms.iter().flatten().copied().collect();
        seen.sort();
        assert_eq!(seen, (0..net.node_count()).collect::<Vec<_>>());
        let singletons: Vec<Vec<usize>> = (0..net.node_count()).map(|v| vec![v]).collect();
        assert!(modularity(&net, &comms) >= modularity(&net, &singletons) - 1e-12);
        assert_eq!(comms, louvain_communities(&net, seed));
    }
}
