//! Verification reports: one record rendered as JSON or as text.
//!
//! JSON schema, version 1. The top level object has the fields
//! `tool`, `version`, `schema_version`, `seed`, `points`, `tol`,
//! `input_digest` (hex SHA-256 of the inputs) and `checks`, an array in the
//! order the checks ran. Each check has `id`, `status` (`PASS`, `FAIL` or
//! `CONSTRAINED`), `method`, `summary`, `residual` (string or null),
//! `constraints` (array of strings), `witness` (string or null) and
//! `details` (check specific object with sorted keys).

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::numeric::{CheckOptions, ZeroCertificate};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Constrained,
    Fail,
}

impl Status {
    pub fn from_pass(pass: bool) -> Status {
        if pass {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Constrained => "CONSTRAINED",
            Status::Fail => "FAIL",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub id: String,
    pub status: Status,
    pub method: String,
    pub summary: String,
    pub residual: Option<String>,
    pub constraints: Vec<String>,
    pub witness: Option<String>,
    pub details: serde_json::Value,
}

impl Check {
    pub fn new(id: impl Into<String>, status: Status, method: impl Into<String>, summary: impl Into<String>) -> Check {
        Check {
            id: id.into(),
            status,
            method: method.into(),
            summary: summary.into(),
            residual: None,
            constraints: Vec::new(),
            witness: None,
            details: serde_json::Value::Null,
        }
    }

    /// Check backed by a zero certificate; residual and witness come from it.
    pub fn certified(id: impl Into<String>, c: &ZeroCertificate, summary: impl Into<String>) -> Check {
        let mut out = Check::new(id, Status::from_pass(c.pass()), c.method(), summary);
        if !c.residual.is_empty() {
            out.residual = Some(c.residual.clone());
        }
        if let Some(n) = &c.numeric {
            if !c.pass() {
                out.witness = n.argmax.map(|i| format!("point {i} of seed {}, scaled {:.3e}", n.seed, n.max_scaled));
            }
        }
        out
    }

    pub fn with_details(mut self, d: impl Serialize) -> Check {
        self.details = serde_json::to_value(d).unwrap_or(serde_json::Value::Null);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub schema_version: u32,
    pub seed: u64,
    pub points: usize,
    pub tol: f64,
    pub input_digest: String,
    pub checks: Vec<Check>,
}

/// Hex SHA-256 over the inputs, each followed by a NUL byte.
pub fn digest(inputs: &[&str]) -> String {
    let mut h = Sha256::new();
    for s in inputs {
        h.update(s.as_bytes());
        h.update([0u8]);
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

impl Report {
    pub fn new(opts: &CheckOptions, inputs: &[&str]) -> Report {
        Report {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            schema_version: SCHEMA_VERSION,
            seed: opts.seed,
            points: opts.points,
            tol: opts.tol,
            input_digest: digest(inputs),
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn count(&self, s: Status) -> usize {
        self.checks.iter().filter(|c| c.status == s).count()
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.status == Status::Pass)
    }

    /// 0 when every check passes, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.all_pass() {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = format!(
            "{} {} seed={} points={} tol={:e} input={}\n",
            self.tool, self.version, self.seed, self.points, self.tol, self.input_digest
        );
        for c in &self.checks {
            s.push_str(&format!("{:<11} {:<9} {}  {}\n", c.status.to_string(), c.method, c.id, c.summary));
            if !c.constraints.is_empty() {
                s.push_str(&format!("{:<21} constraints: {}\n", "", c.constraints.join(", ")));
            }
            if let Some(r) = &c.residual {
                s.push_str(&format!("{:<21} residual: {}\n", "", r));
            }
            if let Some(w) = &c.witness {
                s.push_str(&format!("{:<21} witness: {}\n", "", w));
            }
        }
        s.push_str(&format!(
            "{} checks: {} pass, {} constrained, {} fail\n",
            self.checks.len(),
            self.count(Status::Pass),
            self.count(Status::Constrained),
            self.count(Status::Fail)
        ));
        s
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

pub fn emit_report(r: &Report, format: Format) -> Vec<u8> {
    match format {
        Format::Text => r.to_text().into_bytes(),
        Format::Json => r.to_json().into_bytes(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_report_is_valid_json() {
        let r = Report::new(&CheckOptions::default(), &[]);
        let v: serde_json::Value = serde_json::from_slice(&emit_report(&r, Format::Json)).unwrap();
        assert_eq!(v["checks"].as_array().unwrap().len(), 0);
        assert_eq!(v["seed"], 42);
        assert_eq!(r.exit_code(), 0);
        assert!(r.to_text().contains("seed=42"));
    }

    #[test]
    fn digest_separates_inputs() {
        assert_ne!(digest(&["ab", "c"]), digest(&["a", "bc"]));
        assert_eq!(digest(&[]).len(), 64);
    }

    #[test]
    fn failures_set_the_exit_code() {
        let mut r = Report::new(&CheckOptions::default(), &["x"]);
        r.push(Check::new("a", Status::Pass, "symbolic", ""));
        r.push(Check::new("b", Status::Constrained, "symbolic", ""));
        assert_eq!(r.exit_code(), 1);
        assert!(r.to_text().contains("CONSTRAINED"));
    }
}
