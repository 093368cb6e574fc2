use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use devrank::pipeline::{run_pipeline, sha256_hex, PipelineConfig};
use serde_json::Value;

const ARTIFACTS: [&str; 7] = [
    "collab.jsonl",
    "graph.json",
    "stats.json",
    "communities.json",
    "ratings.csv",
    "hist.csv",
    "metadata.json",
];

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn run_into(dir: &Path) {
    let cfg = PipelineConfig::new(vec![fixture("handtraced_events.jsonl")], dir);
    run_pipeline(&cfg).unwrap();
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn stats_match_golden() {
    let dir = tempfile::tempdir().unwrap();
    run_into(dir.path());
    let golden = read_json(&fixture("handtraced_network.golden.json"));
    let got = read_json(&dir.path().join("stats.json"));
    let want = &golden["stats"];
    for key in ["node_count", "edge_count", "component_count", "isolate_count"] {
        assert_eq!(got[key], want[key], "{key}");
    }
    for key in ["density", "avg_clustering"] {
        let (g, w) = (got[key].as_f64().unwrap(), want[key].as_f64().unwrap());
        assert!((g - w).abs() < 1e-12, "{key}: {g} vs {w}");
    }
    let (g, w) = (&got["largest_component"], &want["largest_component"]);
    assert_eq!(g["node_count"], w["node_count"]);
    assert_eq!(g["edge_count"], w["edge_count"]);
    let asp = g["avg_shortest_path_hops"].as_f64().unwrap();
    assert!((asp - w["avg_shortest_path_hops"].as_f64().unwrap()).abs() < 1e-12);
}

#[test]
fn ratings_match_golden() {
    let dir = tempfile::tempdir().unwrap();
    run_into(dir.path());
    let golden = read_json(&fixture("handtraced_network.golden.json"));
    let want = golden["ratings"].as_array().unwrap();
    let mut reader = csv::Reader::from_path(dir.path().join("ratings.csv")).unwrap();
    let headers = reader.headers().unwrap().clone();
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), want.len());
    for (row, w) in rows.iter().zip(want) {
        let field = |name: &str| row.get(headers.iter().position(|h| h == name).unwrap()).unwrap();
        assert_eq!(field("developer"), w["developer"].as_str().unwrap());
        for metric in ["degree", "closeness", "betweenness", "pagerank"] {
            let got: f64 = field(metric).parse().unwrap();
            let exp = w[metric].as_f64().unwrap();
            assert!((got - exp).abs() < 1e-8, "{} {metric}: {got} vs {exp}", field("developer"));
        }
        // The rating includes normalised eigenvector centrality, so it
        // carries the looser eigenvector tolerance.
        for metric in ["eigenvector", "rating"] {
            let got: f64 = field(metric).parse().unwrap();
            assert!((got - w[metric].as_f64().unwrap()).abs() < 1e-5, "{metric}");
        }
    }
}

#[test]
fn reruns_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    run_into(a.path());
    run_into(b.path());
    for name in ARTIFACTS {
        let x = fs::read(a.path().join(name)).unwrap();
        let y = fs::read(b.path().join(name)).unwrap();
        assert_eq!(x, y, "{name} differs");
    }
}

#[test]
fn metadata_describes_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    run_into(dir.path());
    let meta = read_json(&dir.path().join("metadata.json"));
    assert_eq!(meta["seed"], 42);
    let input = fs::read(fixture("handtraced_events.jsonl")).unwrap();
    assert_eq!(meta["inputs"][0]["sha256"], sha256_hex(&input));
    for name in &ARTIFACTS[..6] {
        let bytes = fs::read(dir.path().join(name)).unwrap();
        assert_eq!(meta["artifacts"][name], sha256_hex(&bytes), "{name}");
    }
}

#[test]
fn communities_partition_the_nodes() {
    let dir = tempfile::tempdir().unwrap();
    run_into(dir.path());
    let comms = read_json(&dir.path().join("communities.json"));
    let graph = read_json(&dir.path().join("graph.json"));
    let mut seen = BTreeSet::new();
    for c in comms["communities"].as_array().unwrap() {
        for m in c.as_array().unwrap() {
            assert!(seen.insert(m.as_str().unwrap().to_string()), "node in two communities");
        }
    }
    let nodes: BTreeSet<String> = graph["nodes"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap().to_string())
        .collect();
    assert_eq!(seen, nodes);
    assert!(comms["modularity"].as_f64().unwrap() > 0.0);
}

#[test]
fn histogram_counts_every_developer() {
    let dir = tempfile::tempdir().unwrap();
    run_into(dir.path());
    let text = fs::read_to_string(dir.path().join("hist.csv")).unwrap();
    let total: usize = text
        .lines()
        .skip(1)
        .map(|l| l.rsplit(',').next().unwrap().parse::<usize>().unwrap())
        .sum();
    assert_eq!(text.lines().count(), 21);
    assert_eq!(total, 8);
}

#[test]
fn isolates_from_roster() {
    let dir = tempfile::tempdir().unwrap();
    let roster = dir.path().join("roster.txt");
    fs::write(&roster, "alice\nzed\nquiet-one\nci[bot]\n").unwrap();
    let mut cfg = PipelineConfig::new(vec![fixture("handtraced_events.jsonl")], dir.path().join("out"));
    cfg.include_isolates = Some(roster);
    let report = run_pipeline(&cfg).unwrap();
    assert_eq!(report.stats.node_count, 10);
    assert_eq!(report.stats.isolate_count, 2);
    assert_eq!(report.stats.component_count, 3);
}
