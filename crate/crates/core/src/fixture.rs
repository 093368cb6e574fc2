//! Synthetic event corpora standing in for crawled repository history.
//!
//! The generator produces schema-valid commit and pull-request records with
//! a configurable share of reviewed commits, bot activity, rejected pull
//! requests and bursts of co-editing on shared files. Output is a pure
//! function of the configuration.

use chrono::{DateTime, Utc};
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::ingest::EventRecord;

/// 2021-01-01T00:00:00Z
const EPOCH: i64 = 1_609_459_200;
const DAY: i64 = 86_400;
pub const FIXTURE_BOT: &str = "fixture-ci[bot]";

#[derive(Debug, Clone, PartialEq)]
pub struct FixtureConfig {
    pub seed: u64,
    pub repos: usize,
    pub devs: usize,
    pub days: usize,
    /// Probability that a commit gets reviewed by another developer.
    pub reviewed_fraction: f64,
    /// Expected commits per repository per day.
    pub commits_per_day: f64,
    /// Probability that a commit is authored by the bot account.
    pub bot_fraction: f64,
    /// Expected rejected pull requests per repository per day.
    pub rejected_pr_rate: f64,
    /// Probability per repository-day of a co-editing burst on one file.
    pub burst_rate: f64,
    pub files_per_repo: usize,
}

impl FixtureConfig {
    pub fn new(seed: u64, repos: usize, devs: usize, days: usize) -> Self {
        Self {
            seed,
            repos,
            devs,
            days,
            reviewed_fraction: 0.5,
            commits_per_day: 1.0,
            bot_fraction: 0.05,
            rejected_pr_rate: 0.05,
            burst_rate: 0.1,
            files_per_repo: 20,
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum FixtureError {
    #[error("{0} must be at least 1")]
    NonPositive(&'static str),
    #[error("{name} must lie in [0, 1], got {value}")]
    Probability { name: &'static str, value: f64 },
}

pub fn developer_name(i: usize) -> String {
    format!("dev{i:03}")
}

struct Repo {
    name: String,
    members: Vec<usize>,
    weights: WeightedIndex<f64>,
    next_pr: u64,
}

struct Generator {
    cfg: FixtureConfig,
    rng: ChaCha8Rng,
    events: Vec<EventRecord>,
}

/// Generates a corpus; events are ordered by timestamp, then repository,
/// kind and id.
pub fn generate_fixture_corpus(cfg: &FixtureConfig) -> Result<Vec<EventRecord>, FixtureError> {
    for (name, v) in [
        ("repos", cfg.repos),
        ("devs", cfg.devs),
        ("days", cfg.days),
        ("files_per_repo", cfg.files_per_repo),
    ] {
        if v == 0 {
            return Err(FixtureError::NonPositive(name));
        }
    }
    for (name, value) in [
        ("reviewed_fraction", cfg.reviewed_fraction),
        ("bot_fraction", cfg.bot_fraction),
        ("burst_rate", cfg.burst_rate),
    ] {
        if !(0.0..=1.0).contains(&value) {
            return Err(FixtureError::Probability { name, value });
        }
    }

    let mut gen = Generator {
        rng: ChaCha8Rng::seed_from_u64(cfg.seed),
        cfg: cfg.clone(),
        events: Vec::new(),
    };
    let mut repos = gen.repos();
    for day in 0..cfg.days as i64 {
        for repo in &mut repos {
            gen.day(repo, day);
        }
    }
    let mut events = gen.events;
    events.sort_by(|a, b| {
        (a.timestamp, &a.repo, a.kind(), &a.id).cmp(&(b.timestamp, &b.repo, b.kind(), &b.id))
    });
    Ok(events)
}

/// Serialises events as line-delimited JSON.
pub fn to_jsonl(events: &[EventRecord]) -> String {
    let mut out = String::new();
    for ev in events {
        out.push_str(&ev.to_json_line());
        out.push('\n');
    }
    out
}

impl Generator {
    fn repos(&mut self) -> Vec<Repo> {
        let devs = self.cfg.devs;
        (0..self.cfg.repos)
            .map(|r| {
                // Each repository draws a team; low-numbered developers are
                // more active everywhere, which yields hub developers.
                let size = if devs <= 3 {
                    devs
                } else {
                    self.rng.random_range(devs.div_ceil(2).max(3)..=devs)
                };
                let mut members = index::sample(&mut self.rng, devs, size).into_vec();
                members.sort_unstable();
                let weights =
                    WeightedIndex::new(members.iter().map(|&m| 1.0 / (m as f64 + 1.0)))
                        .expect("positive weights");
                Repo {
                    name: format!("fixture/repo{r:02}"),
                    members,
                    weights,
                    next_pr: 1,
                }
            })
            .collect()
    }

    fn day(&mut self, repo: &mut Repo, day: i64) {
        let rate = self.cfg.commits_per_day.max(0.0);
        let mut commits = rate.floor() as usize;
        if self.rng.random_bool(rate.fract()) {
            commits += 1;
        }
        for _ in 0..commits {
            let author = self.author(repo);
            let k = 1 + self.rng.random_range(0..3usize);
            let files = self.files(k);
            let at = self.instant(day);
            self.commit(repo, author, files, at);
        }

        if self.rng.random_bool(self.cfg.burst_rate) && repo.members.len() >= 2 {
            // Several members touch the same hot file within a few days.
            let file = format!("src/hot{:02}.rs", self.rng.random_range(0..3usize));
            let k = self.rng.random_range(2..=repo.members.len().min(4));
            let who = index::sample(&mut self.rng, repo.members.len(), k).into_vec();
            for w in who {
                let author = developer_name(repo.members[w]);
                let offset = self.rng.random_range(0..3i64);
                let at = self.instant(day + offset);
                self.commit(repo, author, vec![file.clone()], at);
            }
        }

        let rejected = self.cfg.rejected_pr_rate.clamp(0.0, 1.0);
        if self.rng.random_bool(rejected) && repo.members.len() >= 2 {
            let author = self.human(repo);
            let other = self.other_member(repo, &author).expect("two members");
            let id = repo.next_pr.to_string();
            repo.next_pr += 1;
            let approve = self.rng.random_bool(0.3);
            let at = self.instant(day);
            let hash = self.hash();
            self.events.push(EventRecord::pull_request(
                &repo.name,
                id,
                author,
                at,
                if approve { vec![other.clone()] } else { Vec::new() },
                Some(other),
                false,
                vec![hash],
            ));
        }
    }

    fn commit(&mut self, repo: &mut Repo, author: String, files: Vec<String>, at: DateTime<Utc>) {
        let id = self.hash();
        let reviewed = self.rng.random_bool(self.cfg.reviewed_fraction);
        let reviewer = if reviewed {
            self.other_member(repo, &author)
        } else {
            None
        };
        let via_pr = self.rng.random_bool(0.5);
        let is_bot = author == FIXTURE_BOT;

        let merged_by = match (&reviewer, via_pr) {
            (Some(r), false) => Some(r.clone()),
            _ if is_bot => None,
            _ => self.rng.random_bool(0.7).then(|| author.clone()),
        };
        if via_pr {
            let approvers = reviewer.iter().cloned().collect();
            let pr_id = repo.next_pr.to_string();
            repo.next_pr += 1;
            self.events.push(EventRecord::pull_request(
                &repo.name,
                pr_id,
                author.clone(),
                at,
                approvers,
                None,
                true,
                vec![id.clone()],
            ));
        }
        self.events
            .push(EventRecord::commit(&repo.name, id, author, at, files, merged_by));
    }

    fn author(&mut self, repo: &Repo) -> String {
        if self.rng.random_bool(self.cfg.bot_fraction) {
            FIXTURE_BOT.to_string()
        } else {
            self.human(repo)
        }
    }

    fn human(&mut self, repo: &Repo) -> String {
        developer_name(repo.members[repo.weights.sample(&mut self.rng)])
    }

    /// A random member other than `author`, if the team has one.
    fn other_member(&mut self, repo: &Repo, author: &str) -> Option<String> {
        let others: Vec<String> = repo
            .members
            .iter()
            .map(|&m| developer_name(m))
            .filter(|m| m != author)
            .collect();
        if others.is_empty() {
            None
        } else {
            Some(others[self.rng.random_range(0..others.len())].clone())
        }
    }

    fn files(&mut self, k: usize) -> Vec<String> {
        let n = self.cfg.files_per_repo;
        let mut picked: Vec<String> = (0..k)
            .map(|_| {
                // Squaring skews choices towards low-numbered (hot) files.
                let u: f64 = self.rng.random();
                let f = ((u * u) * n as f64) as usize;
                format!("src/f{:02}.rs", f.min(n - 1))
            })
            .collect();
        picked.sort();
        picked.dedup();
        picked
    }

    fn instant(&mut self, day: i64) -> DateTime<Utc> {
        let secs = EPOCH + day * DAY + self.rng.random_range(0..DAY);
        DateTime::from_timestamp(secs, 0).expect("fixture timestamps in range")
    }

    fn hash(&mut self) -> String {
        let hi: u128 = self.rng.random();
        let lo: u32 = self.rng.random();
        format!("{hi:032x}{lo:08x}")
    }
}
