//! Deterministic verification reports shared by all verifiers.

use serde::{Deserialize, Serialize};

/// Maximum number of counterexamples kept per check. All failures are
/// counted; only the first few (in tuple order) are spelled out.
const MAX_COUNTEREXAMPLES: usize = 8;

/// Result of a single named check: how many instances were examined, how
/// many failed, and the first few failing tuples.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub checked: u64,
    pub failed: u64,
    pub counterexamples: Vec<String>,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.failed == 0
    }

    /// Build a check from the ordered list of failures out of `checked` cases.
    pub fn from_failures(name: &str, checked: u64, failures: Vec<String>) -> Self {
        let failed = failures.len() as u64;
        let mut counterexamples = failures;
        counterexamples.truncate(MAX_COUNTEREXAMPLES);
        Check { name: name.to_string(), checked, failed, counterexamples }
    }

    pub fn pass(name: &str, checked: u64) -> Self {
        Check { name: name.to_string(), checked, failed: 0, counterexamples: Vec::new() }
    }
}

/// A verification report: a named collection of checks.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub subject: String,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(subject: impl Into<String>) -> Self {
        Report { subject: subject.into(), checks: Vec::new() }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    /// One `ok`/`FAIL` line per check, for terminal output.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("== {} ==\n", self.subject));
        for c in &self.checks {
            let status = if c.passed() { "ok  " } else { "FAIL" };
            out.push_str(&format!("{} {} ({} checked, {} failed)\n", status, c.name, c.checked, c.failed));
            for ce in &c.counterexamples {
                out.push_str(&format!("       counterexample: {}\n", ce));
            }
        }
        out
    }
}
