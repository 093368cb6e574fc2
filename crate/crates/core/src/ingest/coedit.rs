use std::collections::{BTreeMap, BTreeSet};

use chrono::{DateTime, Utc};
use rayon::prelude::*;

use super::bots::is_bot;
use super::instance::{sort_instances, CollaborationInstance, CollaborationKind};
use super::record::EventRecord;

pub const DEFAULT_WINDOW_DAYS: u32 = 30;
const SECONDS_PER_DAY: i64 = 86_400;

/// File co-edition instances: one per unordered pair of commits touching the
/// same file, by two different non-bot authors, at most `window_days` apart
/// (inclusive). The instance is dated at the later commit.
pub fn extract_coedition_instances(
    events: &[EventRecord],
    window_days: u32,
) -> Vec<CollaborationInstance> {
    let window = i64::from(window_days) * SECONDS_PER_DAY;

    // repo -> file -> commits touching it
    let mut touches: BTreeMap<&str, BTreeMap<&str, Vec<Touch<'_>>>> = BTreeMap::new();
    for ev in events.iter().filter(|e| e.is_commit() && !is_bot(&e.author)) {
        let files: BTreeSet<&str> = ev.files().iter().map(String::as_str).collect();
        let per_repo = touches.entry(ev.repo.as_str()).or_default();
        for file in files {
            per_repo.entry(file).or_default().push(Touch {
                at: ev.timestamp,
                id: &ev.id,
                author: &ev.author,
            });
        }
    }

    let mut out: Vec<CollaborationInstance> = touches
        .into_par_iter()
        .flat_map_iter(|(repo, files)| {
            let mut found = Vec::new();
            for (_, mut commits) in files {
                commits.sort_by(|x, y| (x.at, x.id).cmp(&(y.at, y.id)));
                for (i, early) in commits.iter().enumerate() {
                    for late in &commits[i + 1..] {
                        if (late.at - early.at).num_seconds() > window {
                            break;
                        }
                        if let Some(inst) = CollaborationInstance::new(
                            CollaborationKind::FileCoEdition,
                            early.author,
                            late.author,
                            late.at,
                            repo,
                            vec![early.id.to_string(), late.id.to_string()],
                        ) {
                            found.push(inst);
                        }
                    }
                }
            }
            found
        })
        .collect();
    sort_instances(&mut out);
    out
}

struct Touch<'a> {
    at: DateTime<Utc>,
    id: &'a str,
    author: &'a str,
}
