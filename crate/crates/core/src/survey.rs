//! Survey-target sampling: ten developers per respondent, split between
//! direct collaborators and the rest of the network, and within each group
//! between the top of the rating table and everyone else.

use std::collections::BTreeSet;
use std::fmt;

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::centrality::RatingTable;
use crate::graph::DevNetwork;

/// Rows of the rating table that form the "top" tier.
pub const TOP_TIER_SIZE: usize = 50;
/// Developers shown to each respondent.
pub const SAMPLE_SIZE: usize = 10;
/// Distinct collaborators needed to be surveyed.
pub const MIN_COLLABORATORS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Stratum {
    NeighborTop50,
    NeighborRest,
    NonNeighborTop50,
    NonNeighborRest,
}

impl Stratum {
    pub const ALL: [Stratum; 4] = [
        Stratum::NeighborTop50,
        Stratum::NeighborRest,
        Stratum::NonNeighborTop50,
        Stratum::NonNeighborRest,
    ];

    /// Target number of picks.
    pub fn quota(self) -> usize {
        match self {
            Stratum::NeighborTop50 | Stratum::NonNeighborTop50 => 3,
            Stratum::NeighborRest | Stratum::NonNeighborRest => 2,
        }
    }

    fn sibling(self) -> Stratum {
        match self {
            Stratum::NeighborTop50 => Stratum::NeighborRest,
            Stratum::NeighborRest => Stratum::NeighborTop50,
            Stratum::NonNeighborTop50 => Stratum::NonNeighborRest,
            Stratum::NonNeighborRest => Stratum::NonNeighborTop50,
        }
    }

    fn slot(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Stratum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyPick {
    pub developer: String,
    pub stratum: Stratum,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveySample {
    pub respondent: String,
    pub picks: Vec<SurveyPick>,
}

impl SurveySample {
    pub fn count(&self, stratum: Stratum) -> usize {
        self.picks.iter().filter(|p| p.stratum == stratum).count()
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SurveyError {
    #[error("respondent {0} is not in the network")]
    UnknownRespondent(String),
    #[error("insufficient population: {nodes} developers, need at least {}", SAMPLE_SIZE + 1)]
    InsufficientPopulation { nodes: usize },
}

/// Developers with at least [`MIN_COLLABORATORS`] distinct neighbours, in
/// node order.
pub fn eligible_respondents(net: &DevNetwork) -> Vec<String> {
    (0..net.node_count())
        .filter(|&v| net.degree(v) >= MIN_COLLABORATORS)
        .map(|v| net.name(v).to_string())
        .collect()
}

/// Draws ten survey targets for `respondent`.
///
/// Quotas are 3/2/3/2 over [`Stratum::ALL`]. A short stratum is backfilled
/// from its sibling (same neighbour class), then from the opposite class.
/// Every pick is labelled with the stratum it was actually drawn from.
pub fn sample_survey_targets(
    net: &DevNetwork,
    table: &RatingTable,
    respondent: &str,
    seed: u64,
) -> Result<SurveySample, SurveyError> {
    let me = net
        .index_of(respondent)
        .ok_or_else(|| SurveyError::UnknownRespondent(respondent.to_string()))?;
    if net.node_count() < SAMPLE_SIZE + 1 {
        return Err(SurveyError::InsufficientPopulation {
            nodes: net.node_count(),
        });
    }

    let top: BTreeSet<&str> = table.top(TOP_TIER_SIZE).into_iter().collect();
    let mut pools: [Vec<usize>; 4] = Default::default();
    for v in (0..net.node_count()).filter(|&v| v != me) {
        let neighbor = net.weight(me, v).is_some();
        let in_top = top.contains(net.name(v));
        let stratum = match (neighbor, in_top) {
            (true, true) => Stratum::NeighborTop50,
            (true, false) => Stratum::NeighborRest,
            (false, true) => Stratum::NonNeighborTop50,
            (false, false) => Stratum::NonNeighborRest,
        };
        pools[stratum.slot()].push(v);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ fnv1a(respondent.as_bytes()));
    let mut picks: Vec<(usize, Stratum)> = Vec::with_capacity(SAMPLE_SIZE);
    let mut shortfall = [0usize; 4];

    for s in Stratum::ALL {
        let want = s.quota();
        let got = draw(&mut pools[s.slot()], want, &mut rng);
        shortfall[s.slot()] = want - got.len();
        picks.extend(got.into_iter().map(|v| (v, s)));
    }
    // Sibling backfill keeps the neighbour/non-neighbour split when possible.
    let mut class_deficit = [0usize; 2];
    for s in Stratum::ALL {
        let need = shortfall[s.slot()];
        if need == 0 {
            continue;
        }
        let sib = s.sibling();
        let got = draw(&mut pools[sib.slot()], need, &mut rng);
        class_deficit[s.slot() / 2] += need - got.len();
        picks.extend(got.into_iter().map(|v| (v, sib)));
    }
    // Cross-class backfill from whatever remains on the other side.
    for (class, &need) in class_deficit.iter().enumerate() {
        if need == 0 {
            continue;
        }
        let other = 1 - class;
        let (tier_a, tier_b) = (Stratum::ALL[other * 2], Stratum::ALL[other * 2 + 1]);
        let mut remaining: Vec<(usize, Stratum)> = pools[tier_a.slot()]
            .iter()
            .map(|&v| (v, tier_a))
            .chain(pools[tier_b.slot()].iter().map(|&v| (v, tier_b)))
            .collect();
        remaining.sort_unstable();
        let k = need.min(remaining.len());
        let chosen = index::sample(&mut rng, remaining.len(), k).into_vec();
        let got: Vec<(usize, Stratum)> = chosen.iter().map(|&i| remaining[i]).collect();
        for &(v, s) in &got {
            pools[s.slot()].retain(|&x| x != v);
        }
        picks.extend(got);
    }

    Ok(SurveySample {
        respondent: respondent.to_string(),
        picks: picks
            .into_iter()
            .map(|(v, stratum)| SurveyPick {
                developer: net.name(v).to_string(),
                stratum,
            })
            .collect(),
    })
}

/// Removes and returns up to `k` uniformly chosen members of `pool`.
fn draw(pool: &mut Vec<usize>, k: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let k = k.min(pool.len());
    if k == 0 {
        return Vec::new();
    }
    let idx = index::sample(rng, pool.len(), k).into_vec();
    let picked: Vec<usize> = idx.iter().map(|&i| pool[i]).collect();
    let mut sorted = idx;
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    for i in sorted {
        pool.remove(i);
    }
    picked
}

fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325u64, |h, &b| {
        (h ^ u64::from(b)).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::centrality::{rate_network, CentralityOptions};
    use std::collections::BTreeMap;

    fn complete(n: usize) -> DevNetwork {
        let names: Vec<String> = (0..n).map(|i| format!("d{i:02}")).collect();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                edges.push((names[i].clone(), names[j].clone(), crate::graph::EdgeWeight::new(1, 0)));
            }
        }
        DevNetwork::from_weighted_edges(Vec::<String>::new(), edges).unwrap()
    }

    fn table(net: &DevNetwork) -> RatingTable {
        rate_network(net, &CentralityOptions::default(), &BTreeMap::new()).unwrap()
    }

    #[test]
    fn eligibility() {
        assert_eq!(eligible_respondents(&complete(6)).len(), 6);
        let star = DevNetwork::from_edge_list(
            &[],
            &[("c", "a", 1), ("c", "b", 1), ("c", "d", 1), ("c", "e", 1)],
        )
        .unwrap();
        assert!(eligible_respondents(&star).is_empty());
    }

    #[test]
    fn errors() {
        let net = complete(10);
        let t = table(&net);
        assert_eq!(
            sample_survey_targets(&net, &t, "d00", 1),
            Err(SurveyError::InsufficientPopulation { nodes: 10 })
        );
        let net = complete(11);
        assert_eq!(
            sample_survey_targets(&net, &table(&net), "nobody", 1),
            Err(SurveyError::UnknownRespondent("nobody".into()))
        );
    }

    #[test]
    fn isolated_respondent_backfills_from_non_neighbors() {
        let mut edges: Vec<(&str, &str, u64)> = Vec::new();
        let names: Vec<String> = (0..12).map(|i| format!("n{i:02}")).collect();
        for i in 0..11 {
            edges.push((&names[i], &names[i + 1], 1));
        }
        let net = DevNetwork::from_edge_list(&["loner"], &edges).unwrap();
        let s = sample_survey_targets(&net, &table(&net), "loner", 3).unwrap();
        assert_eq!(s.picks.len(), 10);
        assert_eq!(s.count(Stratum::NeighborTop50) + s.count(Stratum::NeighborRest), 0);
        // 12 other nodes, all in the top tier.
        assert_eq!(s.count(Stratum::NonNeighborTop50), 10);
    }

    #[test]
    fn deterministic_and_distinct() {
        let net = complete(20);
        let t = table(&net);
        let a = sample_survey_targets(&net, &t, "d03", 9).unwrap();
        let b = sample_survey_targets(&net, &t, "d03", 9).unwrap();
        assert_eq!(a, b);
        let uniq: BTreeSet<&str> = a.picks.iter().map(|p| p.developer.as_str()).collect();
        assert_eq!(uniq.len(), 10);
        assert!(!uniq.contains("d03"));
        // Everyone is a neighbour in the top tier; labels stay truthful.
        assert_eq!(a.count(Stratum::NeighborTop50), 10);
    }
}
