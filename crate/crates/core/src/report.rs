//! Per-prime verification records and the report that wraps them.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};

/// Outcome of checking one congruence at one prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Status {
    Match,
    Mismatch,
    Skipped(String),
    Undefined,
}

impl Status {
    pub fn skipped(reason: impl Into<String>) -> Self {
        Status::Skipped(reason.into())
    }

    pub fn from_agreement(agree: bool) -> Self {
        if agree {
            Status::Match
        } else {
            Status::Mismatch
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Match => f.write_str("match"),
            Status::Mismatch => f.write_str("mismatch"),
            Status::Skipped(reason) => write!(f, "skipped({reason})"),
            Status::Undefined => f.write_str("undefined"),
        }
    }
}

impl Serialize for Status {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
/// Writes `None` as the string `inf`, the marker for an absent value.
pub fn serialize_or_inf<T: Serialize, S: Serializer>(
    value: &Option<T>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match value {
        Some(v) => v.serialize(s),
        None => s.serialize_str("inf"),
    }
}


/// A per-prime row of a [`CongruenceReport`].
pub trait Record: Serialize {
    fn prime(&self) -> u64;
    fn status(&self) -> &Status;
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub matched: usize,
    pub mismatched: usize,
    pub skipped: usize,
    pub undefined: usize,
}

impl Summary {
    pub fn tally<'a, R: Record + 'a>(records: impl IntoIterator<Item = &'a R>) -> Self {
        let mut s = Summary::default();
        for r in records {
            s.total += 1;
            match r.status() {
                Status::Match => s.matched += 1,
                Status::Mismatch => s.mismatched += 1,
                Status::Skipped(_) => s.skipped += 1,
                Status::Undefined => s.undefined += 1,
            }
        }
        s
    }
}

/// Verification output shared by every verifier: tool, parameters,
/// metadata (measured signs, tie-break conventions), ordered records and a
/// summary tally.
#[derive(Debug, Clone, Serialize)]
pub struct CongruenceReport<R> {
    pub tool: String,
    pub params: BTreeMap<String, String>,
    pub metadata: BTreeMap<String, String>,
    pub records: Vec<R>,
    pub summary: Summary,
}

impl<R: Record> CongruenceReport<R> {
    /// Builds the report; records are sorted by prime (stable).
    pub fn new(tool: impl Into<String>, mut records: Vec<R>) -> Self {
        records.sort_by_key(|r| r.prime());
        let summary = Summary::tally(&records);
        CongruenceReport {
            tool: tool.into(),
            params: BTreeMap::new(),
            metadata: BTreeMap::new(),
            records,
            summary,
        }
    }

    pub fn with_param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    pub fn with_meta(mut self, key: &str, value: impl ToString) -> Self {
        self.metadata.insert(key.to_string(), value.to_string());
        self
    }

    pub fn has_failures(&self) -> bool {
        self.summary.mismatched > 0
    }

    pub fn mismatches(&self) -> impl Iterator<Item = &R> {
        self.records
            .iter()
            .filter(|r| *r.status() == Status::Mismatch)
    }
}
