use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::bots::is_bot;
use super::record::{EventBody, EventRecord};
use super::review::{classify_commit, PrIndex, ReviewStatus};

/// Per-developer contribution counts joined into the rating table.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Activity {
    /// Commits the developer authored or reviewed.
    pub commit_count: u64,
    /// Distinct repositories with any authored or reviewed commit or PR.
    pub repo_count: u64,
}

pub fn developer_activity(events: &[EventRecord]) -> BTreeMap<String, Activity> {
    let index = PrIndex::build(events);
    let mut commits: BTreeMap<String, u64> = BTreeMap::new();
    let mut repos: BTreeMap<String, BTreeSet<&str>> = BTreeMap::new();

    for ev in events {
        let status = classify_commit(ev, &index);
        let mut involved: BTreeSet<&str> = BTreeSet::new();
        involved.insert(&ev.author);
        match &ev.body {
            EventBody::Commit { .. } => involved.extend(status.reviewers()),
            EventBody::PullRequest {
                approvers,
                closed_by,
                ..
            } => {
                involved.extend(approvers.iter().map(String::as_str));
                involved.extend(closed_by.as_deref());
            }
        }
        for dev in involved.into_iter().filter(|d| !is_bot(d)) {
            if ev.is_commit() {
                *commits.entry(dev.to_string()).or_default() += 1;
            }
            repos.entry(dev.to_string()).or_default().insert(&ev.repo);
        }
    }

    repos
        .into_iter()
        .map(|(dev, rs)| {
            let activity = Activity {
                commit_count: commits.get(&dev).copied().unwrap_or(0),
                repo_count: rs.len() as u64,
            };
            (dev, activity)
        })
        .collect()
}

/// Every non-bot identifier seen as author, merger, approver or closer.
pub fn collect_roster(events: &[EventRecord]) -> BTreeSet<String> {
    let mut roster = BTreeSet::new();
    for ev in events {
        roster.insert(ev.author.as_str());
        match &ev.body {
            EventBody::Commit { merged_by, .. } => roster.extend(merged_by.as_deref()),
            EventBody::PullRequest {
                approvers,
                closed_by,
                ..
            } => {
                roster.extend(approvers.iter().map(String::as_str));
                roster.extend(closed_by.as_deref());
            }
        }
    }
    roster
        .into_iter()
        .filter(|d| !is_bot(d))
        .map(str::to_string)
        .collect()
}

/// How much of the commit history involves a given set of developers
/// (typically the top decile of the rating table). Bot-authored commits are
/// not counted.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct CommitInvolvement {
    pub total_commits: u64,
    pub reviewed_commits: u64,
    pub unreviewed_commits: u64,
    /// Unreviewed commits authored by a member of the set.
    pub unreviewed_by_set: u64,
    /// Reviewed commits whose author or any reviewer is in the set.
    pub reviewed_involving_set: u64,
}

impl CommitInvolvement {
    pub fn overall_share(&self) -> f64 {
        ratio(self.unreviewed_by_set + self.reviewed_involving_set, self.total_commits)
    }

    pub fn unreviewed_share(&self) -> f64 {
        ratio(self.unreviewed_by_set, self.unreviewed_commits)
    }

    pub fn reviewed_share(&self) -> f64 {
        ratio(self.reviewed_involving_set, self.reviewed_commits)
    }
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

pub fn commit_involvement(events: &[EventRecord], set: &BTreeSet<String>) -> CommitInvolvement {
    let index = PrIndex::build(events);
    let mut out = CommitInvolvement::default();
    for ev in events.iter().filter(|e| e.is_commit() && !is_bot(&e.author)) {
        out.total_commits += 1;
        match classify_commit(ev, &index) {
            ReviewStatus::Unreviewed => {
                out.unreviewed_commits += 1;
                if set.contains(&ev.author) {
                    out.unreviewed_by_set += 1;
                }
            }
            ReviewStatus::Reviewed(reviewers) => {
                out.reviewed_commits += 1;
                if set.contains(&ev.author) || reviewers.iter().any(|r| set.contains(r)) {
                    out.reviewed_involving_set += 1;
                }
            }
        }
    }
    out
}
