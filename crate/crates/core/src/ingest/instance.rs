use std::fmt;
use std::io::{BufRead, Write};

use chrono::{DateTime, Utc};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::bots::is_bot;
use super::record::{format_timestamp, truncate_to_seconds};
use super::IngestError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CollaborationKind {
    #[serde(rename = "co_edition")]
    FileCoEdition,
    #[serde(rename = "author_reviewer")]
    AuthorReviewer,
}

impl CollaborationKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CollaborationKind::FileCoEdition => "co_edition",
            CollaborationKind::AuthorReviewer => "author_reviewer",
        }
    }
}

impl fmt::Display for CollaborationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One dated collaboration between two distinct, non-bot developers.
///
/// The pair is stored with `a < b`, so `(x, y)` and `(y, x)` construct the
/// same instance.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CollaborationInstance {
    pub kind: CollaborationKind,
    pub a: String,
    pub b: String,
    #[serde(serialize_with = "ser_ts", deserialize_with = "de_ts")]
    pub timestamp: DateTime<Utc>,
    pub repo: String,
    pub source_ids: Vec<String>,
}

impl CollaborationInstance {
    /// Builds an instance, returning `None` for self-pairs or bot participants.
    pub fn new(
        kind: CollaborationKind,
        x: &str,
        y: &str,
        timestamp: DateTime<Utc>,
        repo: &str,
        source_ids: Vec<String>,
    ) -> Option<Self> {
        if x == y || is_bot(x) || is_bot(y) {
            return None;
        }
        let (a, b) = if x < y { (x, y) } else { (y, x) };
        Some(Self {
            kind,
            a: a.to_string(),
            b: b.to_string(),
            timestamp: truncate_to_seconds(timestamp),
            repo: repo.to_string(),
            source_ids,
        })
    }

    fn sort_key(&self) -> (&str, &str, DateTime<Utc>, &str, &str, &[String]) {
        (
            &self.repo,
            self.kind.as_str(),
            self.timestamp,
            &self.a,
            &self.b,
            &self.source_ids,
        )
    }
}

/// Sorts instances into the canonical output order
/// (repo, kind, timestamp, a, b, source ids).
pub fn sort_instances(instances: &mut [CollaborationInstance]) {
    instances.sort_by(|x, y| x.sort_key().cmp(&y.sort_key()));
}

pub fn write_instances<W: Write>(
    mut writer: W,
    instances: &[CollaborationInstance],
) -> std::io::Result<()> {
    for inst in instances {
        serde_json::to_writer(&mut writer, inst)?;
        writer.write_all(b"\n")?;
    }
    writer.flush()
}

/// Reads collaboration instances. Unlike event parsing this is strict:
/// instance files are produced by this tool, so any bad line is fatal.
pub fn read_instances<R: BufRead>(reader: R) -> Result<Vec<CollaborationInstance>, IngestError> {
    let mut out = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|err| IngestError::Read {
            source_name: "collaboration instances".to_string(),
            err,
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let inst: CollaborationInstance =
            serde_json::from_str(&line).map_err(|err| IngestError::Instance {
                line: idx + 1,
                reason: err.to_string(),
            })?;
        out.push(inst);
    }
    Ok(out)
}

fn ser_ts<S: Serializer>(ts: &DateTime<Utc>, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_timestamp(ts))
}

fn de_ts<'de, D: Deserializer<'de>>(d: D) -> Result<DateTime<Utc>, D::Error> {
    let raw = String::deserialize(d)?;
    DateTime::parse_from_rfc3339(&raw)
        .map(|t| truncate_to_seconds(t.with_timezone(&Utc)))
        .map_err(serde::de::Error::custom)
}
