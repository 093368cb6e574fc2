use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::CentralityError;
use crate::graph::DevNetwork;
use crate::ingest::Activity;

/// Ratings above this are "High".
pub const HIGH_BAND_THRESHOLD: f64 = 0.2;
/// Ratings below this are "Low".
pub const LOW_BAND_THRESHOLD: f64 = 0.1;

/// One value per centrality measure.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct MetricValues {
    pub degree: f64,
    pub closeness: f64,
    pub betweenness: f64,
    pub eigenvector: f64,
    pub pagerank: f64,
}

impl MetricValues {
    fn sum(&self) -> f64 {
        self.degree + self.closeness + self.betweenness + self.eigenvector + self.pagerank
    }
}

/// Per-metric maps from developer to raw centrality.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct MetricMaps {
    pub degree: BTreeMap<String, f64>,
    pub closeness: BTreeMap<String, f64>,
    pub betweenness: BTreeMap<String, f64>,
    pub eigenvector: BTreeMap<String, f64>,
    pub pagerank: BTreeMap<String, f64>,
}

impl MetricMaps {
    fn named(&self) -> [(&'static str, &BTreeMap<String, f64>); 5] {
        [
            ("degree", &self.degree),
            ("closeness", &self.closeness),
            ("betweenness", &self.betweenness),
            ("eigenvector", &self.eigenvector),
            ("pagerank", &self.pagerank),
        ]
    }

    pub fn raw(&self, developer: &str) -> Option<MetricValues> {
        Some(MetricValues {
            degree: *self.degree.get(developer)?,
            closeness: *self.closeness.get(developer)?,
            betweenness: *self.betweenness.get(developer)?,
            eigenvector: *self.eigenvector.get(developer)?,
            pagerank: *self.pagerank.get(developer)?,
        })
    }
}

/// Raw and normalised centralities plus the aggregated rating of one
/// developer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CentralityVector {
    pub developer: String,
    pub raw: MetricValues,
    pub normalized: MetricValues,
    pub rating: f64,
}

/// Min-max normalisation; a constant population maps to all zeros.
pub fn min_max(values: &[f64]) -> Vec<f64> {
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !(hi > lo) {
        return vec![0.0; values.len()];
    }
    let span = hi - lo;
    values.iter().map(|v| (v - lo) / span).collect()
}

/// Normalises each metric across developers, sums the five normalised
/// values and normalises the sums into ratings. Output is ordered by
/// developer identifier.
pub fn aggregate_ratings(maps: &MetricMaps) -> Result<Vec<CentralityVector>, CentralityError> {
    let keys: Vec<&String> = maps.degree.keys().collect();
    for (name, map) in maps.named() {
        if map.len() != keys.len() || !map.keys().zip(&keys).all(|(a, b)| a == *b) {
            return Err(CentralityError::KeyMismatch(name));
        }
    }

    let column = |map: &BTreeMap<String, f64>| min_max(&map.values().copied().collect::<Vec<_>>());
    let degree = column(&maps.degree);
    let closeness = column(&maps.closeness);
    let betweenness = column(&maps.betweenness);
    let eigenvector = column(&maps.eigenvector);
    let pagerank = column(&maps.pagerank);

    let normalized: Vec<MetricValues> = (0..keys.len())
        .map(|i| MetricValues {
            degree: degree[i],
            closeness: closeness[i],
            betweenness: betweenness[i],
            eigenvector: eigenvector[i],
            pagerank: pagerank[i],
        })
        .collect();
    let sums: Vec<f64> = normalized.iter().map(MetricValues::sum).collect();
    let ratings = min_max(&sums);

    Ok(keys
        .into_iter()
        .zip(normalized)
        .zip(ratings)
        .map(|((dev, normalized), rating)| CentralityVector {
            developer: dev.clone(),
            raw: maps.raw(dev).expect("key sets checked above"),
            normalized,
            rating,
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Band {
    High,
    Average,
    Low,
}

impl Band {
    pub fn of(rating: f64) -> Self {
        if rating > HIGH_BAND_THRESHOLD {
            Band::High
        } else if rating < LOW_BAND_THRESHOLD {
            Band::Low
        } else {
            Band::Average
        }
    }
}

impl fmt::Display for Band {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Band::High => "High",
            Band::Average => "Average",
            Band::Low => "Low",
        })
    }
}

/// Activity counts joined into the rating table.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeveloperActivity {
    pub commit_count: u64,
    pub repo_count: u64,
    pub collaborator_count: u64,
}

/// Combines event-derived activity with neighbour counts from the network.
pub fn join_activity(
    net: &DevNetwork,
    events: &BTreeMap<String, Activity>,
) -> BTreeMap<String, DeveloperActivity> {
    let mut out: BTreeMap<String, DeveloperActivity> = events
        .iter()
        .map(|(dev, a)| {
            (
                dev.clone(),
                DeveloperActivity {
                    commit_count: a.commit_count,
                    repo_count: a.repo_count,
                    collaborator_count: 0,
                },
            )
        })
        .collect();
    for (v, name) in net.names().iter().enumerate() {
        out.entry(name.clone()).or_default().collaborator_count = net.degree(v) as u64;
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatingRow {
    pub rank: usize,
    pub developer: String,
    pub rating: f64,
    pub band: Band,
    pub raw: MetricValues,
    pub normalized: MetricValues,
    pub commit_count: u64,
    pub repo_count: u64,
    pub collaborator_count: u64,
}

/// Developers ranked by rating (descending; ties by identifier).
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RatingTable {
    pub rows: Vec<RatingRow>,
}

pub const CSV_HEADER: [&str; 12] = [
    "rank",
    "developer",
    "rating",
    "band",
    "degree",
    "closeness",
    "betweenness",
    "eigenvector",
    "pagerank",
    "commit_count",
    "repo_count",
    "collaborator_count",
];

pub fn rating_table(
    vectors: &[CentralityVector],
    activity: &BTreeMap<String, DeveloperActivity>,
) -> RatingTable {
    let mut sorted: Vec<&CentralityVector> = vectors.iter().collect();
    sorted.sort_by(|a, b| {
        b.rating
            .total_cmp(&a.rating)
            .then_with(|| a.developer.cmp(&b.developer))
    });
    let rows = sorted
        .into_iter()
        .enumerate()
        .map(|(i, v)| {
            let act = activity.get(&v.developer).copied().unwrap_or_default();
            RatingRow {
                rank: i + 1,
                developer: v.developer.clone(),
                rating: v.rating,
                band: Band::of(v.rating),
                raw: v.raw,
                normalized: v.normalized,
                commit_count: act.commit_count,
                repo_count: act.repo_count,
                collaborator_count: act.collaborator_count,
            }
        })
        .collect();
    RatingTable { rows }
}

impl RatingTable {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Keeps only the first `n` rows.
    pub fn truncated(&self, n: usize) -> RatingTable {
        RatingTable {
            rows: self.rows.iter().take(n).cloned().collect(),
        }
    }

    /// Identifiers of the first `n` rows.
    pub fn top(&self, n: usize) -> Vec<&str> {
        self.rows.iter().take(n).map(|r| r.developer.as_str()).collect()
    }

    pub fn ratings(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.rating).collect()
    }

    /// Number of developers in the High, Average and Low bands.
    pub fn band_counts(&self) -> (usize, usize, usize) {
        self.rows.iter().fold((0, 0, 0), |(h, a, l), r| match r.band {
            Band::High => (h + 1, a, l),
            Band::Average => (h, a + 1, l),
            Band::Low => (h, a, l + 1),
        })
    }

    /// CSV with raw metric values at 9 decimal places.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(CSV_HEADER).expect("in-memory write");
        for r in &self.rows {
            w.write_record([
                r.rank.to_string(),
                r.developer.clone(),
                format!("{:.9}", r.rating),
                r.band.to_string(),
                format!("{:.9}", r.raw.degree),
                format!("{:.9}", r.raw.closeness),
                format!("{:.9}", r.raw.betweenness),
                format!("{:.9}", r.raw.eigenvector),
                format!("{:.9}", r.raw.pagerank),
                r.commit_count.to_string(),
                r.repo_count.to_string(),
                r.collaborator_count.to_string(),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is utf-8")
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("rating tables serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, CentralityError> {
        serde_json::from_str(text).map_err(|e| CentralityError::RatingsFile(e.to_string()))
    }
}

/// Ratings column of a CSV rating table.
pub fn ratings_from_csv(text: &str) -> Result<Vec<f64>, CentralityError> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| CentralityError::RatingsFile(e.to_string()))?
        .clone();
    let col = headers
        .iter()
        .position(|h| h == "rating")
        .ok_or_else(|| CentralityError::RatingsFile("no rating column".to_string()))?;
    reader
        .records()
        .map(|rec| {
            let rec = rec.map_err(|e| CentralityError::RatingsFile(e.to_string()))?;
            rec.get(col)
                .unwrap_or_default()
                .parse::<f64>()
                .map_err(|e| CentralityError::RatingsFile(e.to_string()))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HistogramBin {
    pub lower: f64,
    pub upper: f64,
    pub count: usize,
}

/// Equal-width bins over `[0, 1]`; the last bin includes 1.0.
pub fn histogram(ratings: &[f64], bins: usize) -> Vec<HistogramBin> {
    let bins = bins.max(1);
    let mut counts = vec![0usize; bins];
    for &r in ratings {
        let idx = ((r * bins as f64).floor() as isize).clamp(0, bins as isize - 1) as usize;
        counts[idx] += 1;
    }
    counts
        .into_iter()
        .enumerate()
        .map(|(i, count)| HistogramBin {
            lower: i as f64 / bins as f64,
            upper: (i + 1) as f64 / bins as f64,
            count,
        })
        .collect()
}

pub fn histogram_csv(bins: &[HistogramBin]) -> String {
    let mut out = String::from("bin_start,bin_end,count\n");
    for b in bins {
        out.push_str(&format!("{:.6},{:.6},{}\n", b.lower, b.upper, b.count));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn maps(rows: &[(&str, [f64; 5])]) -> MetricMaps {
        let mut m = MetricMaps::default();
        for (dev, v) in rows {
            m.degree.insert(dev.to_string(), v[0]);
            m.closeness.insert(dev.to_string(), v[1]);
            m.betweenness.insert(dev.to_string(), v[2]);
            m.eigenvector.insert(dev.to_string(), v[3]);
            m.pagerank.insert(dev.to_string(), v[4]);
        }
        m
    }

    #[test]
    fn single_developer_rates_zero() {
        let v = aggregate_ratings(&maps(&[("a", [1.0, 2.0, 3.0, 4.0, 5.0])])).unwrap();
        assert_eq!(v[0].rating, 0.0);
    }

    #[test]
    fn dominant_developer_rates_one() {
        let v = aggregate_ratings(&maps(&[
            ("a", [1.0, 1.0, 1.0, 1.0, 1.0]),
            ("b", [0.5, 0.2, 0.0, 0.3, 0.1]),
            ("c", [0.2, 0.1, 0.5, 0.1, 0.4]),
        ]))
        .unwrap();
        assert_eq!(v[0].rating, 1.0);
        assert!(v.iter().all(|c| (0.0..=1.0).contains(&c.rating)));
    }

    #[test]
    fn five_developer_hand_computation() {
        // Columns min-max normalise to:
        //   a: 1.00 0.0 0.25 1.0 0.0 -> 2.25
        //   b: 0.50 1.0 0.00 0.5 1.0 -> 3.00
        //   c: 0.00 0.5 1.00 0.0 0.5 -> 2.00
        //   d: 0.25 0.0 0.50 0.0 0.0 -> 0.75
        //   e: 0.00 0.0 0.00 0.0 0.0 -> 0.00
        // Ratings: sums / 3.
        let v = aggregate_ratings(&maps(&[
            ("a", [4.0, 1.0, 0.2, 0.9, 0.1]),
            ("b", [2.0, 3.0, 0.0, 0.5, 0.3]),
            ("c", [0.0, 2.0, 0.8, 0.1, 0.2]),
            ("d", [1.0, 1.0, 0.4, 0.1, 0.1]),
            ("e", [0.0, 1.0, 0.0, 0.1, 0.1]),
        ]))
        .unwrap();
        let got: Vec<f64> = v.iter().map(|c| c.rating).collect();
        let want = [2.25 / 3.0, 1.0, 2.0 / 3.0, 0.25, 0.0];
        for (g, w) in got.iter().zip(want) {
            assert!((g - w).abs() < 1e-12, "{got:?}");
        }
    }

    #[test]
    fn constant_metric_contributes_zero() {
        let v = aggregate_ratings(&maps(&[
            ("a", [1.0, 7.0, 0.0, 0.0, 0.0]),
            ("b", [0.0, 7.0, 0.0, 0.0, 0.0]),
        ]))
        .unwrap();
        assert_eq!(v[0].normalized.closeness, 0.0);
        assert_eq!((v[0].rating, v[1].rating), (1.0, 0.0));
    }

    #[test]
    fn key_mismatch_is_fatal() {
        let mut m = maps(&[("a", [0.0; 5]), ("b", [0.0; 5])]);
        m.pagerank.remove("b");
        m.pagerank.insert("z".into(), 0.0);
        assert!(matches!(aggregate_ratings(&m), Err(CentralityError::KeyMismatch("pagerank"))));
    }

    fn vector(dev: &str, rating: f64) -> CentralityVector {
        CentralityVector {
            developer: dev.into(),
            raw: MetricValues::default(),
            normalized: MetricValues::default(),
            rating,
        }
    }

    #[test]
    fn bands_and_ordering() {
        let t = rating_table(
            &[vector("C", 0.05), vector("A", 0.9), vector("B", 0.15)],
            &BTreeMap::new(),
        );
        let got: Vec<(usize, &str, Band)> =
            t.rows.iter().map(|r| (r.rank, r.developer.as_str(), r.band)).collect();
        assert_eq!(got, [(1, "A", Band::High), (2, "B", Band::Average), (3, "C", Band::Low)]);
        assert_eq!(Band::of(0.2), Band::Average);
        assert_eq!(Band::of(0.1), Band::Average);
    }

    #[test]
    fn ties_by_identifier() {
        let t = rating_table(&[vector("zed", 0.5), vector("amy", 0.5)], &BTreeMap::new());
        assert_eq!(t.top(2), ["amy", "zed"]);
        assert!(rating_table(&[], &BTreeMap::new()).is_empty());
    }

    #[test]
    fn csv_layout_and_rating_column() {
        let mut act = BTreeMap::new();
        act.insert(
            "A".to_string(),
            DeveloperActivity {
                commit_count: 3,
                repo_count: 1,
                collaborator_count: 2,
            },
        );
        let t = rating_table(&[vector("A", 1.0), vector("B", 0.0)], &act);
        let csv = t.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), CSV_HEADER.join(","));
        assert_eq!(
            lines.next().unwrap(),
            "1,A,1.000000000,High,0.000000000,0.000000000,0.000000000,0.000000000,0.000000000,3,1,2"
        );
        assert_eq!(ratings_from_csv(&csv).unwrap(), vec![1.0, 0.0]);
        assert_eq!(RatingTable::from_json(&t.to_json()).unwrap(), t);
    }

    #[test]
    fn histogram_bins() {
        let h = histogram(&[0.0, 0.05, 0.1, 0.99, 1.0], 10);
        assert_eq!(h.len(), 10);
        assert_eq!(h[0].count, 2);
        assert_eq!(h[1].count, 1);
        assert_eq!(h[9].count, 2);
        assert!(histogram_csv(&h).starts_with("bin_start,bin_end,count\n0.000000,0.100000,2\n"));
    }
}
