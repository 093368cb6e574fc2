//! The five centrality measures and their aggregation into a developer
//! rating.
//!
//! Shortest-path measures (closeness, betweenness) treat stronger
//! collaboration as shorter distance by default; see [`DistanceMode`].
//! Eigenvector centrality and PageRank always use collaboration counts as
//! weights.

mod betweenness;
mod closeness;
mod degree;
mod eigenvector;
mod pagerank;
mod paths;
mod rating;

use std::collections::BTreeMap;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use betweenness::betweenness_centrality;
pub use closeness::closeness_centrality;
pub use degree::{degree_centrality, weighted_degree_centrality};
pub use eigenvector::{eigenvector_centrality, EIGENVECTOR_MAX_ITER, EIGENVECTOR_TOL};
pub use pagerank::{pagerank, PAGERANK_DAMPING, PAGERANK_MAX_ITER, PAGERANK_TOL};
pub use rating::{
    aggregate_ratings, histogram, histogram_csv, join_activity, min_max, rating_table,
    ratings_from_csv, Band, CentralityVector, DeveloperActivity, HistogramBin, MetricMaps,
    MetricValues, RatingRow, RatingTable, CSV_HEADER, HIGH_BAND_THRESHOLD, LOW_BAND_THRESHOLD,
};

use crate::graph::DevNetwork;

#[derive(Debug, Error)]
pub enum CentralityError {
    #[error("{measure} centrality did not converge after {iterations} iterations{}",
        residual.map(|r| format!(" (residual {r:e})")).unwrap_or_default())]
    NotConverged {
        measure: &'static str,
        iterations: usize,
        residual: Option<f64>,
    },
    #[error("{0} scores do not cover the same developers as degree scores")]
    KeyMismatch(&'static str),
    #[error("invalid ratings file: {0}")]
    RatingsFile(String),
}

/// How edge weights become lengths for shortest-path measures.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DistanceMode {
    /// Length `1 / total collaborations`.
    #[default]
    Inverse,
    /// Length equal to the collaboration count.
    RawWeight,
}

impl DistanceMode {
    pub fn length(self, total_weight: u64) -> f64 {
        match self {
            DistanceMode::Inverse => 1.0 / total_weight as f64,
            DistanceMode::RawWeight => total_weight as f64,
        }
    }
}

impl FromStr for DistanceMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "inverse" => Ok(DistanceMode::Inverse),
            "raw-weight" => Ok(DistanceMode::RawWeight),
            other => Err(format!("unknown distance mode {other:?} (expected inverse|raw-weight)")),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CentralityOptions {
    pub distance: DistanceMode,
    /// Replace unweighted degree with collaboration strength.
    pub weighted_degree: bool,
}

fn keyed(net: &DevNetwork, values: Vec<f64>) -> BTreeMap<String, f64> {
    net.names().iter().cloned().zip(values).collect()
}

/// Raw values of all five measures keyed by developer.
pub fn compute_metrics(
    net: &DevNetwork,
    opts: &CentralityOptions,
) -> Result<MetricMaps, CentralityError> {
    let degree = if opts.weighted_degree {
        weighted_degree_centrality(net)
    } else {
        degree_centrality(net)
    };
    Ok(MetricMaps {
        degree: keyed(net, degree),
        closeness: keyed(net, closeness_centrality(net, opts.distance)),
        betweenness: keyed(net, betweenness_centrality(net, opts.distance)),
        eigenvector: keyed(net, eigenvector_centrality(net)?),
        pagerank: keyed(net, pagerank(net)?),
    })
}

/// Computes every measure, aggregates ratings and builds the ranked table.
pub fn rate_network(
    net: &DevNetwork,
    opts: &CentralityOptions,
    activity: &BTreeMap<String, DeveloperActivity>,
) -> Result<RatingTable, CentralityError> {
    let maps = compute_metrics(net, opts)?;
    let vectors = aggregate_ratings(&maps)?;
    Ok(rating_table(&vectors, activity))
}
