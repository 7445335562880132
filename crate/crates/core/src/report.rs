//! Structured pass/fail reports shared by the verifiers and the CLI.

use std::time::Duration;

use serde::Serialize;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// A labelled expression in the shared grammar (or a plain description for
/// data outside it, such as permutations).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub label: String,
    pub expr: String,
}

impl Witness {
    pub fn new(label: impl Into<String>, expr: impl ToString) -> Self {
        Witness {
            label: label.into(),
            expr: expr.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub status: Status,
    pub witness: Vec<Witness>,
    pub detail: String,
    /// Wall time; kept out of serialized output so reports stay byte-stable.
    #[serde(skip)]
    pub timing: Option<Duration>,
}

impl CheckRecord {
    pub fn pass(name: impl Into<String>, detail: impl Into<String>) -> Self {
        CheckRecord {
            name: name.into(),
            status: Status::Pass,
            witness: Vec::new(),
            detail: detail.into(),
            timing: None,
        }
    }

    pub fn fail(name: impl Into<String>, detail: impl Into<String>, witness: Vec<Witness>) -> Self {
        CheckRecord {
            name: name.into(),
            status: Status::Fail,
            witness,
            detail: detail.into(),
            timing: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn with_timing(mut self, t: Duration) -> Self {
        self.timing = Some(t);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub checks: Vec<CheckRecord>,
    /// Named results of the command (generated documents, products, ...).
    pub outputs: Vec<Witness>,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            command: command.into(),
            checks: Vec::new(),
            outputs: Vec::new(),
        }
    }

    pub fn push(&mut self, check: CheckRecord) {
        self.checks.push(check);
    }

    pub fn output(&mut self, label: impl Into<String>, expr: impl ToString) {
        self.outputs.push(Witness::new(label, expr));
    }

    /// Append the checks of `other`, prefixing their names.
    pub fn absorb(&mut self, prefix: &str, other: Report) {
        for mut c in other.checks {
            c.name = format!("{prefix}{}", c.name);
            self.checks.push(c);
        }
        self.outputs.extend(other.outputs);
    }

    pub fn passed(&self) -> usize {
        self.checks.iter().filter(|c| c.passed()).count()
    }

    pub fn total(&self) -> usize {
        self.checks.len()
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(CheckRecord::passed)
    }

    pub fn summary(&self) -> String {
        format!("{}/{}", self.passed(), self.total())
    }

    pub fn find(&self, name: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.name == name)
    }
}
