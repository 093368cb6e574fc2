use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn devrank(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_devrank"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str], cwd: &Path) -> String {
    let out = devrank(args, cwd);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn every_subcommand_documents_its_flags() {
    let dir = tempfile::tempdir().unwrap();
    let expected: &[(&str, &[&str])] = &[
        ("ingest", &["--events", "--out", "--diagnostics", "--roster", "--window-days"]),
        ("build", &["--collab", "--include-isolates", "--out"]),
        ("stats", &["--graph", "--table", "--json", "--seed"]),
        ("communities", &["--graph", "--seed", "--out"]),
        ("rate", &["--graph", "--top", "--distance", "--weighted-degree", "--out"]),
        ("histogram", &["--ratings", "--bins", "--out"]),
        ("sample", &["--graph", "--respondent", "--all-eligible", "--out"]),
        ("fixture", &["--seed", "--repos", "--devs", "--days", "--reviewed-fraction", "--out"]),
        ("pipeline", &["--events", "--out-dir", "--seed", "--include-isolates"]),
    ];
    for (cmd, flags) in expected {
        let help = ok(&[cmd, "--help"], dir.path());
        for flag in *flags {
            assert!(help.contains(flag), "{cmd} --help lacks {flag}");
        }
        assert!(help.contains("--quiet"));
    }
    assert!(ok(&["--help"], dir.path()).contains("pipeline"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    let out = devrank(&["pipeline", "--events", "absent.jsonl", "--out-dir", "o"], p);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("absent.jsonl"));
    assert!(!p.join("o").exists());

    assert_eq!(devrank(&["rate", "--graph"], p).status.code(), Some(2));
    assert_eq!(devrank(&["frobnicate"], p).status.code(), Some(2));

    fs::write(p.join("bad.json"), "{not json").unwrap();
    let out = devrank(&["stats", "--graph", "bad.json"], p);
    assert_eq!(out.status.code(), Some(2));

    // Ten developers cannot fill a survey sample: an analysis error.
    let mut edges = Vec::new();
    for i in 0..9 {
        edges.push(format!(r#"{{"a":"d{i}","b":"d{}","co_edition":1,"review":0}}"#, i + 1));
    }
    let nodes: Vec<String> = (0..10).map(|i| format!("\"d{i}\"")).collect();
    fs::write(
        p.join("small.json"),
        format!(r#"{{"nodes":[{}],"edges":[{}]}}"#, nodes.join(","), edges.join(",")),
    )
    .unwrap();
    let out = devrank(&["sample", "--graph", "small.json", "--respondent", "d0", "--out", "s.jsonl"], p);
    assert_eq!(out.status.code(), Some(1), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn stages_chain_together() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    ok(&["--quiet", "fixture", "--repos", "3", "--devs", "24", "--days", "120", "--out", "ev.jsonl"], p);
    fs::write(
        p.join("ev2.jsonl"),
        "garbage\n{\"kind\":\"commit\",\"repo\":\"x/y\",\"id\":\"1\",\"author\":\"solo\",\"timestamp\":\"2021-01-01T00:00:00Z\",\"files\":[\"a\"]}\n",
    )
    .unwrap();
    let summary = ok(
        &[
            "--json", "ingest", "--events", "ev.jsonl", "ev2.jsonl", "--out", "collab.jsonl",
            "--diagnostics", "diag.jsonl", "--roster", "roster.txt",
        ],
        p,
    );
    let v: serde_json::Value = serde_json::from_str(summary.trim()).unwrap();
    assert_eq!(v["rejected_lines"], 1);
    assert_eq!(fs::read_to_string(p.join("diag.jsonl")).unwrap().lines().count(), 1);
    assert!(fs::read_to_string(p.join("roster.txt")).unwrap().lines().any(|l| l == "solo"));

    ok(&["build", "--collab", "collab.jsonl", "--include-isolates", "roster.txt", "--out", "graph.json"], p);
    let stats: serde_json::Value =
        serde_json::from_str(&ok(&["--json", "stats", "--graph", "graph.json"], p)).unwrap();
    assert!(stats["isolate_count"].as_u64().unwrap() >= 1);
    let table = ok(&["stats", "--graph", "graph.json", "--table"], p);
    assert!(table.contains("Avg. clustering coefficient"));

    ok(&["communities", "--graph", "graph.json", "--out", "comm.json"], p);
    ok(&["rate", "--graph", "graph.json", "--events", "ev.jsonl", "--out", "ratings.csv"], p);
    ok(&["rate", "--graph", "graph.json", "--top", "5", "--out", "top.json"], p);
    let top: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(p.join("top.json")).unwrap()).unwrap();
    assert_eq!(top["rows"].as_array().unwrap().len(), 5);
    ok(&["rate", "--graph", "graph.json", "--distance", "raw-weight", "--weighted-degree", "--out", "raw.csv"], p);

    ok(&["histogram", "--ratings", "ratings.csv", "--bins", "10", "--out", "h.csv"], p);
    ok(&["histogram", "--ratings", "top.json", "--bins", "4", "--out", "h2.csv"], p);
    let h = fs::read_to_string(p.join("h.csv")).unwrap();
    assert_eq!(h.lines().count(), 11);

    ok(&["sample", "--graph", "graph.json", "--all-eligible", "--out", "s.jsonl"], p);
    for line in fs::read_to_string(p.join("s.jsonl")).unwrap().lines() {
        let s: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(s["picks"].as_array().unwrap().len(), 10);
    }

    let csv = fs::read_to_string(p.join("ratings.csv")).unwrap();
    assert!(csv.starts_with(
        "rank,developer,rating,band,degree,closeness,betweenness,eigenvector,pagerank,commit_count,repo_count,collaborator_count\n"
    ));
}

#[test]
fn empty_events_produce_empty_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    fs::write(p.join("empty.jsonl"), "").unwrap();
    ok(&["--quiet", "pipeline", "--events", "empty.jsonl", "--out-dir", "out"], p);
    assert_eq!(fs::read_to_string(p.join("out/collab.jsonl")).unwrap(), "");
    assert_eq!(fs::read_to_string(p.join("out/ratings.csv")).unwrap().lines().count(), 1);
}
