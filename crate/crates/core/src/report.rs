//! Pass/fail records for numerical identity checks.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationRecord {
    pub identity: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl VerificationRecord {
    pub fn new(identity: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        // NaN never passes
        let pass = residual <= tolerance;
        Self { identity: identity.into(), residual, tolerance, pass }
    }
}

impl fmt::Display for VerificationRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.pass { "PASS" } else { "FAIL" };
        write!(f, "{verdict}  {:<48} residual={:.3e}  tol={:.1e}", self.identity, self.residual, self.tolerance)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub records: Vec<VerificationRecord>,
}

impl VerificationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, identity: impl Into<String>, residual: f64, tolerance: f64) {
        self.records.push(VerificationRecord::new(identity, residual, tolerance));
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.records.extend(other.records);
    }

    pub fn all_pass(&self) -> bool {
        self.records.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &VerificationRecord> {
        self.records.iter().filter(|r| !r.pass)
    }

    pub fn get(&self, identity: &str) -> Option<&VerificationRecord> {
        self.records.iter().find(|r| r.identity == identity)
    }

    pub fn max_residual(&self) -> f64 {
        self.records.iter().map(|r| r.residual).fold(0.0, f64::max)
    }

    /// Stable ordering by identity name.
    pub fn sorted(mut self) -> Self {
        self.records.sort_by(|a, b| a.identity.cmp(&b.identity));
        self
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.records {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}
