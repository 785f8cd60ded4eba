//! Per-check residual reports shared by every verifier.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomEntry {
    pub check: String,
    pub residual: f64,
    pub pass: bool,
}

/// One entry per named check; `overall` is the conjunction of the entries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub entries: Vec<AxiomEntry>,
    pub overall: bool,
}

impl Default for AxiomReport {
    fn default() -> Self {
        Self::new()
    }
}

impl AxiomReport {
    pub fn new() -> Self {
        Self {
            entries: Vec::new(),
            overall: true,
        }
    }

    pub fn push(&mut self, check: impl Into<String>, residual: f64, pass: bool) {
        let pass = pass && residual.is_finite();
        self.entries.push(AxiomEntry {
            check: check.into(),
            residual,
            pass,
        });
        self.overall &= pass;
    }

    /// Adds an entry that passes iff `residual <= threshold`.
    pub fn push_residual(&mut self, check: impl Into<String>, residual: f64, threshold: f64) {
        self.push(check, residual, residual <= threshold);
    }

    /// Appends every entry of `other`, prefixing check names with `prefix.`.
    pub fn merge(&mut self, prefix: &str, other: AxiomReport) {
        for e in other.entries {
            let name = if prefix.is_empty() {
                e.check
            } else {
                format!("{prefix}.{}", e.check)
            };
            self.push(name, e.residual, e.pass);
        }
    }

    pub fn entry(&self, check: &str) -> Option<&AxiomEntry> {
        self.entries.iter().find(|e| e.check == check)
    }

    pub fn passes(&self, check: &str) -> Option<bool> {
        self.entry(check).map(|e| e.pass)
    }

    pub fn failing(&self) -> impl Iterator<Item = &AxiomEntry> {
        self.entries.iter().filter(|e| !e.pass)
    }

    pub fn max_residual(&self) -> f64 {
        self.entries.iter().map(|e| e.residual).fold(0.0, f64::max)
    }
}

/// `max(0, floor - value)`: zero when `value` clears `floor`, the shortfall otherwise.
pub(crate) fn shortfall(value: f64, floor: f64) -> f64 {
    (floor - value).max(0.0)
}
