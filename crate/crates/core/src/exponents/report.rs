//! Verification reports.

use std::collections::BTreeMap;

use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub check: String,
    pub instances: u64,
    pub passes: u64,
    /// Serialized failing instances.
    pub counterexamples: Vec<String>,
    /// Instances outside the hypotheses of the checked statement.
    pub quarantined: u64,
    /// Measured constants and trend values, exact where numeric.
    pub measured: BTreeMap<String, String>,
    /// Reported only; never gates a run.
    pub informational: bool,
}

impl VerificationReport {
    pub fn new(check: &str) -> Self {
        VerificationReport {
            check: check.to_string(),
            instances: 0,
            passes: 0,
            counterexamples: Vec::new(),
            quarantined: 0,
            measured: BTreeMap::new(),
            informational: false,
        }
    }

    pub fn informational(mut self) -> Self {
        self.informational = true;
        self
    }

    pub fn record(&mut self, pass: bool, instance: impl FnOnce() -> String) {
        self.instances += 1;
        if pass {
            self.passes += 1;
        } else {
            self.counterexamples.push(instance());
        }
    }

    pub fn quarantine(&mut self) {
        self.quarantined += 1;
    }

    pub fn measure(&mut self, key: &str, value: impl ToString) {
        self.measured.insert(key.to_string(), value.to_string());
    }

    pub fn all_pass(&self) -> bool {
        self.passes == self.instances
    }

    /// Gating verdict: informational reports always pass.
    pub fn ok(&self) -> bool {
        self.informational || self.all_pass()
    }
}
