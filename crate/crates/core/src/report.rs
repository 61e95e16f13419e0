//! Residual checks and the reports that collect them.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub threshold: f64,
    pub passed: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, residual: f64, threshold: f64) -> Self {
        // NaN residuals never pass
        let passed = residual <= threshold;
        Self {
            name: name.into(),
            residual,
            threshold,
            passed,
        }
    }

    /// A yes/no condition recorded as residual 0 or 1 against threshold 0.5.
    pub fn flag(name: impl Into<String>, ok: bool) -> Self {
        Self::new(name, if ok { 0.0 } else { 1.0 }, 0.5)
    }
}

/// Ordered collection of checks; passes iff every check passes.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn max_residual(&self) -> f64 {
        self.checks.iter().fold(0.0, |acc, c| acc.max(c.residual))
    }
}

/// Top-level report: checks keyed by name, named scalar outputs and free-form findings.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub kind: String,
    pub passed: bool,
    pub checks: Vec<Check>,
    pub values: BTreeMap<String, f64>,
    pub findings: BTreeMap<String, String>,
}

impl Report {
    pub fn new(kind: impl Into<String>) -> Self {
        Self {
            kind: kind.into(),
            passed: true,
            ..Default::default()
        }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, prefix: &str, report: &ValidationReport) {
        for c in &report.checks {
            let mut c = c.clone();
            c.name = format!("{prefix}.{}", c.name);
            self.checks.push(c);
        }
    }

    pub fn value(&mut self, name: impl Into<String>, v: f64) {
        self.values.insert(name.into(), v);
    }

    pub fn finding(&mut self, name: impl Into<String>, text: impl Into<String>) {
        self.findings.insert(name.into(), text.into());
    }

    /// Sorts checks by name and recomputes the verdict.
    pub fn finish(mut self) -> Self {
        self.checks.sort_by(|a, b| a.name.cmp(&b.name));
        self.passed = self.checks.iter().all(|c| c.passed);
        self
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn get_check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Human-readable rendering, one line per check.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{} report: {}\n",
            self.kind,
            if self.passed { "PASS" } else { "FAIL" }
        );
        for c in &self.checks {
            out.push_str(&format!(
                "  [{}] {:<60} residual {:.3e} <= {:.3e}\n",
                if c.passed { "pass" } else { "FAIL" },
                c.name,
                c.residual,
                c.threshold
            ));
        }
        for (k, v) in &self.values {
            out.push_str(&format!("  {k} = {v}\n"));
        }
        for (k, v) in &self.findings {
            out.push_str(&format!("  note {k}: {v}\n"));
        }
        out
    }
}
