//! Python bindings for the devrank core library.
//!
//! Structured results (statistics, rating rows, survey picks) are returned
//! as plain dicts and lists.

use std::collections::BTreeMap;
use std::path::PathBuf;

use pyo3::exceptions::{PyFileNotFoundError, PyOSError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use pyo3::IntoPyObjectExt;

use devrank_core::centrality::{
    compute_metrics, histogram, join_activity, rate_network, CentralityOptions, DistanceMode,
};
use devrank_core::fixture::{generate_fixture_corpus, to_jsonl, FixtureConfig};
use devrank_core::graph::{
    avg_clustering, build_network_with_roster, components, louvain_communities, modularity, stats,
    DevNetwork,
};
use devrank_core::ingest::{
    collect_roster, dedup_events, developer_activity, extract_all_instances, parse_events,
    EventRecord, DEFAULT_WINDOW_DAYS,
};
use devrank_core::pipeline::{run_pipeline as run, PipelineConfig, PipelineError};
use devrank_core::survey::{eligible_respondents, sample_survey_targets, SurveyError};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn runtime_err(e: impl std::fmt::Display) -> PyErr {
    PyRuntimeError::new_err(e.to_string())
}

fn json_to_py<'py>(py: Python<'py>, v: &serde_json::Value) -> PyResult<Bound<'py, PyAny>> {
    use serde_json::Value;
    match v {
        Value::Null => Ok(py.None().into_bound(py)),
        Value::Bool(b) => b.into_bound_py_any(py),
        Value::Number(n) => match (n.as_u64(), n.as_i64()) {
            (Some(u), _) => u.into_bound_py_any(py),
            (None, Some(i)) => i.into_bound_py_any(py),
            _ => n.as_f64().unwrap_or(f64::NAN).into_bound_py_any(py),
        },
        Value::String(s) => s.into_bound_py_any(py),
        Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(json_to_py(py, item)?)?;
            }
            Ok(list.into_any())
        }
        Value::Object(map) => {
            let dict = PyDict::new(py);
            for (k, item) in map {
                dict.set_item(k, json_to_py(py, item)?)?;
            }
            Ok(dict.into_any())
        }
    }
}

fn to_py<'py, T: serde::Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let v = serde_json::to_value(value).map_err(runtime_err)?;
    json_to_py(py, &v)
}

fn parse_distance(distance: &str) -> PyResult<DistanceMode> {
    distance.parse().map_err(PyValueError::new_err)
}

fn events_from_text(text: &str) -> (Vec<EventRecord>, Vec<String>) {
    let parsed = parse_events(text.as_bytes(), "<string>").expect("reading from memory");
    let (events, diags) = dedup_events(vec![("<string>".to_string(), parsed)]);
    (events, diags.iter().map(ToString::to_string).collect())
}

/// True for bot accounts (identifiers ending in `[bot]`).
#[pyfunction]
fn is_bot(developer: &str) -> bool {
    devrank_core::ingest::is_bot(developer)
}

/// Parses line-delimited JSON events. Returns `(events, diagnostics)`, where
/// each event is a dict in the input schema.
#[pyfunction]
fn parse_events_jsonl<'py>(
    py: Python<'py>,
    text: &str,
) -> PyResult<(Bound<'py, PyAny>, Vec<String>)> {
    let (events, diags) = events_from_text(text);
    let values: Vec<serde_json::Value> = events
        .iter()
        .map(|e| serde_json::from_str(&e.to_json_line()).expect("own output parses"))
        .collect();
    Ok((json_to_py(py, &serde_json::Value::Array(values))?, diags))
}

/// Collaboration instances derived from an event stream.
#[pyfunction]
#[pyo3(signature = (text, window_days = DEFAULT_WINDOW_DAYS))]
fn extract_instances<'py>(py: Python<'py>, text: &str, window_days: u32) -> PyResult<Bound<'py, PyAny>> {
    if window_days < 1 {
        return Err(value_err("window_days must be at least 1"));
    }
    let (events, _) = events_from_text(text);
    to_py(py, &extract_all_instances(&events, window_days))
}

/// Synthetic event corpus as JSON lines.
#[pyfunction]
#[pyo3(signature = (seed, repos, devs, days, reviewed_fraction = 0.5))]
fn generate_fixture(
    seed: u64,
    repos: usize,
    devs: usize,
    days: usize,
    reviewed_fraction: f64,
) -> PyResult<String> {
    let mut cfg = FixtureConfig::new(seed, repos, devs, days);
    cfg.reviewed_fraction = reviewed_fraction;
    Ok(to_jsonl(&generate_fixture_corpus(&cfg).map_err(value_err)?))
}

/// Runs the full pipeline and returns a summary dict.
#[pyfunction]
#[pyo3(signature = (event_paths, out_dir, seed = devrank_core::DEFAULT_SEED, window_days = DEFAULT_WINDOW_DAYS, distance = "inverse"))]
fn run_pipeline<'py>(
    py: Python<'py>,
    event_paths: Vec<PathBuf>,
    out_dir: PathBuf,
    seed: u64,
    window_days: u32,
    distance: &str,
) -> PyResult<Bound<'py, PyAny>> {
    let mut cfg = PipelineConfig::new(event_paths, out_dir);
    cfg.seed = seed;
    cfg.window_days = window_days;
    cfg.distance = parse_distance(distance)?;
    let report = py.detach(|| run(&cfg)).map_err(|e| match &e {
        PipelineError::MissingInput(_) => PyFileNotFoundError::new_err(e.to_string()),
        PipelineError::Io { .. } | PipelineError::Ingest(_) => PyOSError::new_err(e.to_string()),
        PipelineError::Config(_) => value_err(e),
        PipelineError::Graph(_) | PipelineError::Centrality(_) => runtime_err(e),
    })?;
    let summary = serde_json::json!({
        "artifacts": report.artifacts.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
        "events": report.event_count,
        "instances": report.instance_count,
        "rejected_lines": report.diagnostics.len(),
        "stats": report.stats,
    });
    json_to_py(py, &summary)
}

/// An undirected weighted developer collaboration network.
#[pyclass(name = "Network", module = "devrank", frozen)]
struct PyNetwork {
    net: DevNetwork,
    activity: BTreeMap<String, devrank_core::ingest::Activity>,
}

impl PyNetwork {
    fn options(distance: &str, weighted_degree: bool) -> PyResult<CentralityOptions> {
        Ok(CentralityOptions {
            distance: parse_distance(distance)?,
            weighted_degree,
        })
    }

    fn table(&self, distance: &str, weighted_degree: bool) -> PyResult<devrank_core::RatingTable> {
        let opts = Self::options(distance, weighted_degree)?;
        let activity = join_activity(&self.net, &self.activity);
        rate_network(&self.net, &opts, &activity).map_err(runtime_err)
    }

    fn names_of(&self, groups: Vec<Vec<usize>>) -> Vec<Vec<String>> {
        groups
            .into_iter()
            .map(|g| g.into_iter().map(|v| self.net.name(v).to_string()).collect())
            .collect()
    }
}

#[pymethods]
impl PyNetwork {
    /// Builds a network from `(a, b, weight)` triples plus optional extra
    /// nodes. Weights count as co-editions.
    #[new]
    #[pyo3(signature = (edges, nodes = Vec::new()))]
    fn new(edges: Vec<(String, String, u64)>, nodes: Vec<String>) -> PyResult<Self> {
        let edges: Vec<(&str, &str, u64)> = edges
            .iter()
            .map(|(a, b, w)| (a.as_str(), b.as_str(), *w))
            .collect();
        let nodes: Vec<&str> = nodes.iter().map(String::as_str).collect();
        Ok(Self {
            net: DevNetwork::from_edge_list(&nodes, &edges).map_err(value_err)?,
            activity: BTreeMap::new(),
        })
    }

    /// Builds a network from JSON-lines events. With `include_isolates`,
    /// every non-bot developer seen becomes a node.
    #[staticmethod]
    #[pyo3(signature = (text, window_days = DEFAULT_WINDOW_DAYS, include_isolates = false))]
    fn from_events(text: &str, window_days: u32, include_isolates: bool) -> PyResult<Self> {
        if window_days < 1 {
            return Err(value_err("window_days must be at least 1"));
        }
        let (events, _) = events_from_text(text);
        let instances = extract_all_instances(&events, window_days);
        let roster = if include_isolates {
            collect_roster(&events).into_iter().collect()
        } else {
            Vec::new()
        };
        Ok(Self {
            net: build_network_with_roster(&instances, roster).map_err(value_err)?,
            activity: developer_activity(&events),
        })
    }

    /// Loads a `graph.json` document.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self {
            net: DevNetwork::from_json(text).map_err(value_err)?,
            activity: BTreeMap::new(),
        })
    }

    fn to_json(&self) -> String {
        self.net.to_json()
    }

    #[getter]
    fn node_count(&self) -> usize {
        self.net.node_count()
    }

    #[getter]
    fn edge_count(&self) -> usize {
        self.net.edge_count()
    }

    #[getter]
    fn names(&self) -> Vec<String> {
        self.net.names().to_vec()
    }

    /// `(co_edition, review)` counts for a pair, or None.
    fn weight(&self, a: &str, b: &str) -> Option<(u64, u64)> {
        self.net
            .weight_by_name(a, b)
            .map(|w| (w.co_edition_count, w.review_count))
    }

    fn degree(&self, developer: &str) -> PyResult<usize> {
        let v = self
            .net
            .index_of(developer)
            .ok_or_else(|| PyValueError::new_err(format!("unknown developer {developer}")))?;
        Ok(self.net.degree(v))
    }

    #[pyo3(signature = (seed = devrank_core::DEFAULT_SEED))]
    fn stats<'py>(&self, py: Python<'py>, seed: u64) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &stats(&self.net, seed))
    }

    fn components(&self) -> Vec<Vec<String>> {
        self.names_of(components(&self.net))
    }

    fn avg_clustering(&self) -> f64 {
        avg_clustering(&self.net)
    }

    #[pyo3(signature = (seed = devrank_core::DEFAULT_SEED))]
    fn communities(&self, seed: u64) -> Vec<Vec<String>> {
        self.names_of(louvain_communities(&self.net, seed))
    }

    /// Modularity of a partition given as lists of developer names.
    fn modularity(&self, communities: Vec<Vec<String>>) -> PyResult<f64> {
        let idx = communities
            .iter()
            .map(|c| {
                c.iter()
                    .map(|n| {
                        self.net
                            .index_of(n)
                            .ok_or_else(|| PyValueError::new_err(format!("unknown developer {n}")))
                    })
                    .collect::<PyResult<Vec<usize>>>()
            })
            .collect::<PyResult<Vec<_>>>()?;
        Ok(modularity(&self.net, &idx))
    }

    /// Raw values of the five measures: `{measure: {developer: value}}`.
    #[pyo3(signature = (distance = "inverse", weighted_degree = false))]
    fn centralities<'py>(
        &self,
        py: Python<'py>,
        distance: &str,
        weighted_degree: bool,
    ) -> PyResult<Bound<'py, PyAny>> {
        let opts = Self::options(distance, weighted_degree)?;
        let maps = py
            .detach(|| compute_metrics(&self.net, &opts))
            .map_err(runtime_err)?;
        to_py(py, &maps)
    }

    /// Rating table rows, best first.
    #[pyo3(signature = (distance = "inverse", weighted_degree = false))]
    fn rate<'py>(
        &self,
        py: Python<'py>,
        distance: &str,
        weighted_degree: bool,
    ) -> PyResult<Bound<'py, PyAny>> {
        let table = self.table(distance, weighted_degree)?;
        to_py(py, &table.rows)
    }

    /// Rating histogram as `(lower, upper, count)` triples.
    #[pyo3(signature = (bins = 20))]
    fn histogram(&self, bins: usize) -> PyResult<Vec<(f64, f64, usize)>> {
        if bins < 1 {
            return Err(value_err("bins must be at least 1"));
        }
        let table = self.table("inverse", false)?;
        Ok(histogram(&table.ratings(), bins)
            .into_iter()
            .map(|b| (b.lower, b.upper, b.count))
            .collect())
    }

    fn eligible_respondents(&self) -> Vec<String> {
        eligible_respondents(&self.net)
    }

    /// Ten `(developer, stratum)` survey picks for `respondent`.
    #[pyo3(signature = (respondent, seed = devrank_core::DEFAULT_SEED))]
    fn sample_survey_targets(&self, respondent: &str, seed: u64) -> PyResult<Vec<(String, String)>> {
        let table = self.table("inverse", false)?;
        let sample = sample_survey_targets(&self.net, &table, respondent, seed).map_err(|e| {
            match e {
                SurveyError::UnknownRespondent(_) => value_err(e),
                SurveyError::InsufficientPopulation { .. } => runtime_err(e),
            }
        })?;
        Ok(sample
            .picks
            .into_iter()
            .map(|p| (p.developer, p.stratum.to_string()))
            .collect())
    }

    fn __len__(&self) -> usize {
        self.net.node_count()
    }

    fn __repr__(&self) -> String {
        format!(
            "Network(nodes={}, edges={})",
            self.net.node_count(),
            self.net.edge_count()
        )
    }
}

#[pymodule]
fn devrank(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PyNetwork>()?;
    m.add_function(wrap_pyfunction!(is_bot, m)?)?;
    m.add_function(wrap_pyfunction!(parse_events_jsonl, m)?)?;
    m.add_function(wrap_pyfunction!(extract_instances, m)?)?;
    m.add_function(wrap_pyfunction!(generate_fixture, m)?)?;
    m.add_function(wrap_pyfunction!(run_pipeline, m)?)?;
    Ok(())
}
