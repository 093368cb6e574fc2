//! End-to-end run: events in, every artifact out.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, BufReader};
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::json;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::centrality::{
    histogram, histogram_csv, join_activity, rate_network, CentralityError, CentralityOptions,
    DistanceMode, RatingTable,
};
use crate::graph::{
    build_network_with_roster, louvain_communities, modularity, stats, DevNetwork, GraphError,
    NetworkStats,
};
use crate::ingest::{
    dedup_events, developer_activity, extract_all_instances, is_bot, parse_events,
    write_instances, Diagnostic, EventRecord, IngestError, DEFAULT_WINDOW_DAYS,
};

pub const COLLAB_FILE: &str = "collab.jsonl";
pub const GRAPH_FILE: &str = "graph.json";
pub const STATS_FILE: &str = "stats.json";
pub const COMMUNITIES_FILE: &str = "communities.json";
pub const RATINGS_FILE: &str = "ratings.csv";
pub const HIST_FILE: &str = "hist.csv";
pub const METADATA_FILE: &str = "metadata.json";
pub const DEFAULT_BINS: usize = 20;

pub const TOOL_NAME: &str = "devrank";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub event_paths: Vec<PathBuf>,
    pub output_dir: PathBuf,
    pub seed: u64,
    pub window_days: u32,
    pub distance: DistanceMode,
    pub weighted_degree: bool,
    /// Roster file (one developer per line) whose entries become nodes even
    /// without collaborations.
    pub include_isolates: Option<PathBuf>,
    pub bins: usize,
}

impl PipelineConfig {
    pub fn new(event_paths: Vec<PathBuf>, output_dir: impl Into<PathBuf>) -> Self {
        Self {
            event_paths,
            output_dir: output_dir.into(),
            seed: crate::DEFAULT_SEED,
            window_days: DEFAULT_WINDOW_DAYS,
            distance: DistanceMode::default(),
            weighted_degree: false,
            include_isolates: None,
            bins: DEFAULT_BINS,
        }
    }

    fn validate(&self) -> Result<(), PipelineError> {
        if self.window_days < 1 {
            return Err(PipelineError::Config("window_days must be at least 1".into()));
        }
        if self.bins < 1 {
            return Err(PipelineError::Config("bins must be at least 1".into()));
        }
        if self.event_paths.is_empty() {
            return Err(PipelineError::Config("no event files given".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("input not found: {}", .0.display())]
    MissingInput(PathBuf),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Centrality(#[from] CentralityError),
}

impl PipelineError {
    /// 2 for usage and I/O problems, 1 for analysis failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::MissingInput(_)
            | PipelineError::Io { .. }
            | PipelineError::Config(_)
            | PipelineError::Ingest(_) => 2,
            PipelineError::Graph(_) | PipelineError::Centrality(_) => 1,
        }
    }

    pub fn io(path: &Path, source: io::Error) -> Self {
        if source.kind() == io::ErrorKind::NotFound {
            PipelineError::MissingInput(path.to_path_buf())
        } else {
            PipelineError::Io {
                path: path.to_path_buf(),
                source,
            }
        }
    }
}

/// Parses and de-duplicates the given event files.
pub fn load_events(paths: &[PathBuf]) -> Result<(Vec<EventRecord>, Vec<Diagnostic>), PipelineError> {
    let mut parsed = Vec::with_capacity(paths.len());
    for path in paths {
        let file = fs::File::open(path).map_err(|e| PipelineError::io(path, e))?;
        let source = path.display().to_string();
        parsed.push((source.clone(), parse_events(BufReader::new(file), &source)?));
    }
    Ok(dedup_events(parsed))
}

/// Reads a roster: one developer id per line. Blank lines and bot accounts
/// are skipped.
pub fn read_roster(path: &Path) -> Result<Vec<String>, PipelineError> {
    let text = fs::read_to_string(path).map_err(|e| PipelineError::io(path, e))?;
    Ok(parse_roster(&text))
}

pub fn parse_roster(text: &str) -> Vec<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !is_bot(l))
        .map(str::to_string)
        .collect()
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

#[derive(Debug, Serialize)]
struct CommunitiesFile<'a> {
    seed: u64,
    modularity: f64,
    communities: Vec<Vec<&'a str>>,
}

/// Louvain partition as `{seed, modularity, communities}` JSON.
pub fn communities_json(net: &DevNetwork, seed: u64) -> String {
    let comms = louvain_communities(net, seed);
    let file = CommunitiesFile {
        seed,
        modularity: modularity(net, &comms),
        communities: comms
            .iter()
            .map(|c| c.iter().map(|&v| net.name(v)).collect())
            .collect(),
    };
    pretty(&file)
}

pub fn pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serialisable value");
    s.push('\n');
    s
}

/// What a successful run produced.
#[derive(Debug, Clone)]
pub struct PipelineReport {
    pub artifacts: Vec<PathBuf>,
    pub diagnostics: Vec<Diagnostic>,
    pub event_count: usize,
    pub instance_count: usize,
    pub stats: NetworkStats,
    pub ratings: RatingTable,
}

/// Runs ingest, build, stats, communities, rate and histogram, then writes
/// the artifacts plus a metadata sidecar into `output_dir`.
///
/// All artifacts are computed before anything is written. If writing fails
/// midway, files written by this run are removed.
pub fn run_pipeline(cfg: &PipelineConfig) -> Result<PipelineReport, PipelineError> {
    cfg.validate()?;
    let mut input_hashes = Vec::new();
    for path in &cfg.event_paths {
        let bytes = fs::read(path).map_err(|e| PipelineError::io(path, e))?;
        input_hashes.push(json!({"path": path.display().to_string(), "sha256": sha256_hex(&bytes)}));
    }
    let (events, diagnostics) = load_events(&cfg.event_paths)?;
    for d in &diagnostics {
        log::warn!("{d}");
    }
    let roster = match &cfg.include_isolates {
        Some(path) => {
            let bytes = fs::read(path).map_err(|e| PipelineError::io(path, e))?;
            input_hashes.push(json!({"path": path.display().to_string(), "sha256": sha256_hex(&bytes)}));
            parse_roster(&String::from_utf8_lossy(&bytes))
        }
        None => Vec::new(),
    };

    let instances = extract_all_instances(&events, cfg.window_days);
    log::info!("{} events, {} collaboration instances", events.len(), instances.len());
    let net = build_network_with_roster(&instances, roster)?;
    let net_stats = stats(&net, cfg.seed);
    let opts = CentralityOptions {
        distance: cfg.distance,
        weighted_degree: cfg.weighted_degree,
    };
    let activity = join_activity(&net, &developer_activity(&events));
    let table = rate_network(&net, &opts, &activity)?;

    let mut collab = Vec::new();
    write_instances(&mut collab, &instances).expect("in-memory write");
    let mut artifacts: Vec<(&str, Vec<u8>)> = vec![
        (COLLAB_FILE, collab),
        (GRAPH_FILE, net.to_json().into_bytes()),
        (STATS_FILE, pretty(&net_stats).into_bytes()),
        (COMMUNITIES_FILE, communities_json(&net, cfg.seed).into_bytes()),
        (RATINGS_FILE, table.to_csv().into_bytes()),
        (
            HIST_FILE,
            histogram_csv(&histogram(&table.ratings(), cfg.bins)).into_bytes(),
        ),
    ];
    let artifact_hashes: BTreeMap<&str, String> = artifacts
        .iter()
        .map(|(name, bytes)| (*name, sha256_hex(bytes)))
        .collect();
    let metadata = json!({
        "tool": TOOL_NAME,
        "version": TOOL_VERSION,
        "seed": cfg.seed,
        "window_days": cfg.window_days,
        "distance": cfg.distance,
        "weighted_degree": cfg.weighted_degree,
        "bins": cfg.bins,
        "inputs": input_hashes,
        "artifacts": artifact_hashes,
    });
    artifacts.push((METADATA_FILE, pretty(&metadata).into_bytes()));

    let mut written: Vec<PathBuf> = Vec::new();
    let result = (|| {
        fs::create_dir_all(&cfg.output_dir).map_err(|e| PipelineError::Io {
            path: cfg.output_dir.clone(),
            source: e,
        })?;
        for (name, bytes) in &artifacts {
            let path = cfg.output_dir.join(name);
            fs::write(&path, bytes).map_err(|e| PipelineError::Io {
                path: path.clone(),
                source: e,
            })?;
            written.push(path);
        }
        Ok(())
    })();
    if let Err(e) = result {
        for path in &written {
            let _ = fs::remove_file(path);
        }
        return Err(e);
    }

    Ok(PipelineReport {
        artifacts: written,
        diagnostics,
        event_count: events.len(),
        instance_count: instances.len(),
        stats: net_stats,
        ratings: table,
    })
}
