use std::collections::HashMap;
use std::fmt;
use std::io::BufRead;

use chrono::{DateTime, SecondsFormat, Utc};
use serde::{Deserialize, Serialize};

use super::IngestError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    Commit,
    PullRequest,
}

impl EventKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EventKind::Commit => "commit",
            EventKind::PullRequest => "pull_request",
        }
    }
}

impl fmt::Display for EventKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Kind-specific payload of an [`EventRecord`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EventBody {
    Commit {
        files: Vec<String>,
        merged_by: Option<String>,
    },
    PullRequest {
        approvers: Vec<String>,
        closed_by: Option<String>,
        merged: bool,
        commit_ids: Vec<String>,
    },
}

/// One commit or pull-request observation from a repository's history.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventRecord {
    pub repo: String,
    pub id: String,
    pub author: String,
    /// UTC, truncated to whole seconds.
    pub timestamp: DateTime<Utc>,
    pub body: EventBody,
}

impl EventRecord {
    pub fn commit(
        repo: impl Into<String>,
        id: impl Into<String>,
        author: impl Into<String>,
        timestamp: DateTime<Utc>,
        files: Vec<String>,
        merged_by: Option<String>,
    ) -> Self {
        Self {
            repo: repo.into(),
            id: id.into(),
            author: author.into(),
            timestamp: truncate_to_seconds(timestamp),
            body: EventBody::Commit { files, merged_by },
        }
    }

    #[allow(clippy::too_many_arguments)]
    pub fn pull_request(
        repo: impl Into<String>,
        id: impl Into<String>,
        author: impl Into<String>,
        timestamp: DateTime<Utc>,
        approvers: Vec<String>,
        closed_by: Option<String>,
        merged: bool,
        commit_ids: Vec<String>,
    ) -> Self {
        Self {
            repo: repo.into(),
            id: id.into(),
            author: author.into(),
            timestamp: truncate_to_seconds(timestamp),
            body: EventBody::PullRequest {
                approvers,
                closed_by,
                merged,
                commit_ids,
            },
        }
    }

    pub fn kind(&self) -> EventKind {
        match self.body {
            EventBody::Commit { .. } => EventKind::Commit,
            EventBody::PullRequest { .. } => EventKind::PullRequest,
        }
    }

    pub fn is_commit(&self) -> bool {
        self.kind() == EventKind::Commit
    }

    /// File list of a commit; empty for pull requests.
    pub fn files(&self) -> &[String] {
        match &self.body {
            EventBody::Commit { files, .. } => files,
            EventBody::PullRequest { .. } => &[],
        }
    }

    /// Serializes the record as one JSON line (without the trailing newline).
    pub fn to_json_line(&self) -> String {
        let wire = WireEvent::from(self);
        serde_json::to_string(&wire).expect("event records always serialize")
    }
}

/// A rejected input line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub source: String,
    /// 1-based line number.
    pub line: usize,
    pub reason: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.source, self.line, self.reason)
    }
}

/// Result of parsing one event stream.
#[derive(Debug, Clone, Default)]
pub struct ParsedEvents {
    pub events: Vec<EventRecord>,
    /// Line number of each entry in `events`.
    pub lines: Vec<usize>,
    pub diagnostics: Vec<Diagnostic>,
}

/// Parses a line-delimited JSON event stream.
///
/// Every line produces exactly one record or one diagnostic, in input order.
/// Only a failure to read the stream itself is fatal.
pub fn parse_events<R: BufRead>(reader: R, source: &str) -> Result<ParsedEvents, IngestError> {
    let mut out = ParsedEvents::default();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|err| IngestError::Read {
            source_name: source.to_string(),
            err,
        })?;
        match parse_event_line(&line) {
            Ok(event) => {
                out.events.push(event);
                out.lines.push(line_no);
            }
            Err(reason) => out.diagnostics.push(Diagnostic {
                source: source.to_string(),
                line: line_no,
                reason,
            }),
        }
    }
    Ok(out)
}

/// Parses a single JSON line into an [`EventRecord`], returning the
/// rejection reason on failure.
pub fn parse_event_line(line: &str) -> Result<EventRecord, String> {
    if line.trim().is_empty() {
        return Err("empty line".to_string());
    }
    let wire: WireEvent =
        serde_json::from_str(line).map_err(|err| format!("malformed record: {err}"))?;

    let kind = match wire.kind.as_deref() {
        None => return Err("missing field: kind".to_string()),
        Some("commit") => EventKind::Commit,
        Some("pull_request") => EventKind::PullRequest,
        Some(other) => return Err(format!("unknown kind: {other:?}")),
    };
    let repo = required(wire.repo, "repo")?;
    let id = match wire.id {
        None => return Err("missing field: id".to_string()),
        Some(WireId::Text(s)) if s.is_empty() => return Err("empty field: id".to_string()),
        Some(WireId::Text(s)) => s,
        Some(WireId::Number(n)) => n.to_string(),
    };
    let author = required(wire.author, "author")?;
    let raw_ts = wire
        .timestamp
        .ok_or_else(|| "missing field: timestamp".to_string())?;
    let timestamp = DateTime::parse_from_rfc3339(&raw_ts)
        .map_err(|err| format!("invalid timestamp {raw_ts:?}: {err}"))?
        .with_timezone(&Utc);

    let body = match kind {
        EventKind::Commit => {
            reject_foreign(kind, &[
                ("approvers", wire.approvers.is_some()),
                ("closed_by", wire.closed_by.is_some()),
                ("merged", wire.merged.is_some()),
                ("commit_ids", wire.commit_ids.is_some()),
            ])?;
            EventBody::Commit {
                files: wire.files.unwrap_or_default(),
                merged_by: optional(wire.merged_by, "merged_by")?,
            }
        }
        EventKind::PullRequest => {
            reject_foreign(kind, &[
                ("files", wire.files.is_some()),
                ("merged_by", wire.merged_by.is_some()),
            ])?;
            EventBody::PullRequest {
                approvers: wire.approvers.unwrap_or_default(),
                closed_by: optional(wire.closed_by, "closed_by")?,
                merged: wire
                    .merged
                    .ok_or_else(|| "missing field: merged".to_string())?,
                commit_ids: wire.commit_ids.unwrap_or_default(),
            }
        }
    };

    Ok(EventRecord {
        repo,
        id,
        author,
        timestamp: truncate_to_seconds(timestamp),
        body,
    })
}

/// Removes duplicate records (same repo, kind and id). The last occurrence
/// wins and takes the position of that last occurrence; every dropped
/// earlier occurrence yields a diagnostic.
pub fn dedup_events(parsed: Vec<(String, ParsedEvents)>) -> (Vec<EventRecord>, Vec<Diagnostic>) {
    let mut flat: Vec<(String, usize, EventRecord)> = Vec::new();
    let mut diagnostics = Vec::new();
    for (source, p) in parsed {
        diagnostics.extend(p.diagnostics);
        for (line, ev) in p.lines.into_iter().zip(p.events) {
            flat.push((source.clone(), line, ev));
        }
    }

    let mut last: HashMap<(String, EventKind, String), usize> = HashMap::new();
    for (pos, (_, _, ev)) in flat.iter().enumerate() {
        last.insert((ev.repo.clone(), ev.kind(), ev.id.clone()), pos);
    }

    let mut events = Vec::with_capacity(last.len());
    for (pos, (source, line, ev)) in flat.into_iter().enumerate() {
        let key = (ev.repo.clone(), ev.kind(), ev.id.clone());
        let winner = last[&key];
        if winner == pos {
            events.push(ev);
        } else {
            diagnostics.push(Diagnostic {
                source,
                line,
                reason: format!(
                    "duplicate {} {}/{}: superseded by a later record",
                    ev.kind(),
                    ev.repo,
                    ev.id
                ),
            });
        }
    }
    (events, diagnostics)
}

pub(crate) fn truncate_to_seconds(ts: DateTime<Utc>) -> DateTime<Utc> {
    DateTime::from_timestamp(ts.timestamp(), 0).expect("whole-second timestamps are in range")
}

pub(crate) fn format_timestamp(ts: &DateTime<Utc>) -> String {
    ts.to_rfc3339_opts(SecondsFormat::Secs, true)
}

fn required(value: Option<String>, field: &str) -> Result<String, String> {
    match value {
        None => Err(format!("missing field: {field}")),
        Some(s) if s.is_empty() => Err(format!("empty field: {field}")),
        Some(s) => Ok(s),
    }
}

fn optional(value: Option<String>, field: &str) -> Result<Option<String>, String> {
    match value {
        Some(s) if s.is_empty() => Err(format!("empty field: {field}")),
        other => Ok(other),
    }
}

fn reject_foreign(kind: EventKind, fields: &[(&str, bool)]) -> Result<(), String> {
    match fields.iter().find(|(_, present)| *present) {
        Some((name, _)) => Err(format!("field {name} not allowed for kind {kind}")),
        None => Ok(()),
    }
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(untagged)]
enum WireId {
    Text(String),
    Number(u64),
}

#[derive(Debug, Default, Deserialize, Serialize)]
struct WireEvent {
    #[serde(default)]
    kind: Option<String>,
    #[serde(default)]
    repo: Option<String>,
    #[serde(default)]
    id: Option<WireId>,
    #[serde(default)]
    author: Option<String>,
    #[serde(default)]
    timestamp: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    files: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    merged_by: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    approvers: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    closed_by: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    merged: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    commit_ids: Option<Vec<String>>,
}

impl From<&EventRecord> for WireEvent {
    fn from(ev: &EventRecord) -> Self {
        let mut wire = WireEvent {
            kind: Some(ev.kind().as_str().to_string()),
            repo: Some(ev.repo.clone()),
            id: Some(WireId::Text(ev.id.clone())),
            author: Some(ev.author.clone()),
            timestamp: Some(format_timestamp(&ev.timestamp)),
            ..Default::default()
        };
        match &ev.body {
            EventBody::Commit { files, merged_by } => {
                wire.files = Some(files.clone());
                wire.merged_by = merged_by.clone();
            }
            EventBody::PullRequest {
                approvers,
                closed_by,
                merged,
                commit_ids,
            } => {
                wire.approvers = Some(approvers.clone());
                wire.closed_by = closed_by.clone();
                wire.merged = Some(*merged);
                wire.commit_ids = Some(commit_ids.clone());
            }
        }
        wire
    }
}
