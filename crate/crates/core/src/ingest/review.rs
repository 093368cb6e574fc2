use std::collections::{BTreeMap, BTreeSet, HashMap};

use rayon::prelude::*;

use super::bots::is_bot;
use super::instance::{sort_instances, CollaborationInstance, CollaborationKind};
use super::record::{EventBody, EventRecord};

/// Maps `(repo, commit hash)` to the pull requests that contain the commit.
#[derive(Debug, Default)]
pub struct PrIndex<'a> {
    by_commit: HashMap<&'a str, HashMap<&'a str, Vec<&'a EventRecord>>>,
}

impl<'a> PrIndex<'a> {
    pub fn build(events: &'a [EventRecord]) -> Self {
        let mut by_commit: HashMap<&str, HashMap<&str, Vec<&EventRecord>>> = HashMap::new();
        for ev in events {
            if let EventBody::PullRequest { commit_ids, .. } = &ev.body {
                for cid in commit_ids {
                    by_commit
                        .entry(ev.repo.as_str())
                        .or_default()
                        .entry(cid.as_str())
                        .or_default()
                        .push(ev);
                }
            }
        }
        Self { by_commit }
    }

    pub fn prs_for(&self, repo: &str, commit_id: &str) -> &[&'a EventRecord] {
        self.by_commit
            .get(repo)
            .and_then(|m| m.get(commit_id))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReviewStatus {
    Reviewed(BTreeSet<String>),
    Unreviewed,
}

impl ReviewStatus {
    pub fn is_reviewed(&self) -> bool {
        matches!(self, ReviewStatus::Reviewed(_))
    }

    pub fn reviewers(&self) -> impl Iterator<Item = &str> {
        let set = match self {
            ReviewStatus::Reviewed(set) => Some(set),
            ReviewStatus::Unreviewed => None,
        };
        set.into_iter().flatten().map(String::as_str)
    }
}

/// Decides whether a commit was reviewed by someone other than its author.
///
/// The reviewer set is the union of approvers on every associated PR plus a
/// distinct `merged_by`, minus the author and bot accounts. A commit is
/// reviewed iff that set is nonempty. Pull-request records are `Unreviewed`.
pub fn classify_commit(commit: &EventRecord, prs: &PrIndex<'_>) -> ReviewStatus {
    let EventBody::Commit { merged_by, .. } = &commit.body else {
        return ReviewStatus::Unreviewed;
    };
    let mut reviewers = BTreeSet::new();
    for pr in prs.prs_for(&commit.repo, &commit.id) {
        if let EventBody::PullRequest { approvers, .. } = &pr.body {
            reviewers.extend(approvers.iter().cloned());
        }
    }
    reviewers.extend(merged_by.iter().cloned());
    reviewers.retain(|r| r != &commit.author && !is_bot(r));
    if reviewers.is_empty() {
        ReviewStatus::Unreviewed
    } else {
        ReviewStatus::Reviewed(reviewers)
    }
}

/// Author/reviewer instances from reviewed commits and from non-merged
/// (rejected) pull requests that were approved or closed by someone else.
pub fn extract_review_instances(events: &[EventRecord]) -> Vec<CollaborationInstance> {
    let index = PrIndex::build(events);
    let mut by_repo: BTreeMap<&str, Vec<&EventRecord>> = BTreeMap::new();
    for ev in events {
        by_repo.entry(ev.repo.as_str()).or_default().push(ev);
    }
    let mut out: Vec<CollaborationInstance> = by_repo
        .into_par_iter()
        .flat_map_iter(|(_, evs)| {
            evs.into_iter()
                .flat_map(|ev| review_instances_for(ev, &index))
                .collect::<Vec<_>>()
        })
        .collect();
    sort_instances(&mut out);
    out
}

fn review_instances_for(ev: &EventRecord, index: &PrIndex<'_>) -> Vec<CollaborationInstance> {
    if is_bot(&ev.author) {
        return Vec::new();
    }
    let reviewers: BTreeSet<String> = match &ev.body {
        EventBody::Commit { .. } => match classify_commit(ev, index) {
            ReviewStatus::Reviewed(set) => set,
            ReviewStatus::Unreviewed => BTreeSet::new(),
        },
        EventBody::PullRequest { merged: true, .. } => BTreeSet::new(),
        EventBody::PullRequest {
            merged: false,
            approvers,
            closed_by,
            ..
        } => approvers.iter().chain(closed_by.iter()).cloned().collect(),
    };
    reviewers
        .into_iter()
        .filter_map(|r| {
            CollaborationInstance::new(
                CollaborationKind::AuthorReviewer,
                &ev.author,
                &r,
                ev.timestamp,
                &ev.repo,
                vec![ev.id.clone()],
            )
        })
        .collect()
}
