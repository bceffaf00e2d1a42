use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// One failed probe of a check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub at: String,
    pub detail: String,
}

/// Outcome of an exhaustive check: how many probes ran and which failed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub check: String,
    pub parameters: BTreeMap<String, String>,
    pub probes: usize,
    pub violations: Vec<Violation>,
}

impl Report {
    pub fn new(check: &str) -> Self {
        Self {
            check: check.to_string(),
            parameters: BTreeMap::new(),
            probes: 0,
            violations: Vec::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.parameters.insert(key.to_string(), value.to_string());
        self
    }

    pub fn violation(&mut self, at: impl ToString, detail: impl ToString) {
        self.violations.push(Violation {
            at: at.to_string(),
            detail: detail.to_string(),
        });
    }

    /// Records one probe; a `Some` detail counts as a violation.
    pub fn probe(&mut self, at: impl ToString, failure: Option<String>) {
        self.probes += 1;
        if let Some(detail) = failure {
            self.violation(at, detail);
        }
    }

    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    /// Folds another report's probes and violations into this one.
    pub fn absorb(&mut self, other: Report) {
        self.probes += other.probes;
        self.violations.extend(other.violations);
    }
}
