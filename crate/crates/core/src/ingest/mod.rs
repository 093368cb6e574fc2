//! Event parsing, bot filtering, review classification and extraction of
//! dated collaboration instances.

mod activity;
mod bots;
mod coedit;
mod instance;
mod record;
mod review;

use thiserror::Error;

pub use activity::{
    collect_roster, commit_involvement, developer_activity, Activity, CommitInvolvement,
};
pub use bots::{is_bot, BOT_SUFFIX};
pub use coedit::{extract_coedition_instances, DEFAULT_WINDOW_DAYS};
pub use instance::{
    read_instances, sort_instances, write_instances, CollaborationInstance, CollaborationKind,
};
pub use record::{
    dedup_events, parse_event_line, parse_events, Diagnostic, EventBody, EventKind, EventRecord,
    ParsedEvents,
};
pub use review::{classify_commit, extract_review_instances, PrIndex, ReviewStatus};

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("cannot read {source_name}: {err}")]
    Read {
        source_name: String,
        #[source]
        err: std::io::Error,
    },
    #[error("invalid collaboration instance on line {line}: {reason}")]
    Instance { line: usize, reason: String },
}

/// All collaboration instances (co-edition then review, each canonically
/// sorted) derived from a deduplicated event list.
pub fn extract_all_instances(events: &[EventRecord], window_days: u32) -> Vec<CollaborationInstance> {
    let mut all = extract_coedition_instances(events, window_days);
    all.extend(extract_review_instances(events));
    sort_instances(&mut all);
    all
}
