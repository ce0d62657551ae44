//! Uniform outcome of every check.

use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::semantics::TransitionLabel;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    /// A bound was hit; nothing is certified.
    Inconclusive,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Inconclusive => 3,
        }
    }

    /// Combine two statuses: any failure fails, otherwise any gap is inconclusive.
    pub fn and(self, other: Status) -> Status {
        match (self, other) {
            (Status::Fail, _) | (_, Status::Fail) => Status::Fail,
            (Status::Inconclusive, _) | (_, Status::Inconclusive) => Status::Inconclusive,
            _ => Status::Pass,
        }
    }
}

/// One differing field in a round trip.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDiff {
    pub field: String,
    pub before: String,
    pub after: String,
}

/// Evidence attached to a failing report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// A path from the initial state; `position` marks the offending step.
    Trace {
        labels: Vec<TransitionLabel>,
        position: Option<usize>,
    },
    /// Rule name and the offending detail.
    Rule { rule: String, detail: String },
    /// Field-level differences.
    Diff { fields: Vec<FieldDiff> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<Witness>,
}

impl VerificationReport {
    pub fn new(check: impl Into<String>, status: Status) -> Self {
        VerificationReport {
            check: check.into(),
            status,
            notes: Vec::new(),
            warnings: Vec::new(),
            witnesses: Vec::new(),
        }
    }

    pub fn pass(check: impl Into<String>) -> Self {
        Self::new(check, Status::Pass)
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn fail_with(&mut self, witness: Witness) {
        self.status = self.status.and(Status::Fail);
        self.witnesses.push(witness);
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}
