//! JSON report structures emitted by the command-line interface.
//!
//! Every mathematical field is an integer, an exact rational rendered as
//! "num/den", or a verdict; timings live in their own block so that two
//! runs over the same input agree byte-for-byte everywhere else.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::homology::HomologyReport;
use crate::linalg::{fmt_rat, Rat};

pub const REPORT_SCHEMA: &str = "slalg-report/1";

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct DegreeRow {
    pub degree: usize,
    pub chain_dim: usize,
    pub rank_d_below: usize,
    pub rank_d: usize,
    pub betti: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub details: BTreeMap<String, String>,
}

impl CheckResult {
    pub fn pass(name: &str) -> Self {
        CheckResult {
            name: name.to_string(),
            pass: true,
            details: BTreeMap::new(),
        }
    }

    pub fn fail(name: &str, reason: &str) -> Self {
        let mut details = BTreeMap::new();
        details.insert("reason".to_string(), reason.to_string());
        CheckResult {
            name: name.to_string(),
            pass: false,
            details,
        }
    }

    pub fn skipped(name: &str, why: &str) -> Self {
        let mut details = BTreeMap::new();
        details.insert("skipped".to_string(), why.to_string());
        CheckResult {
            name: name.to_string(),
            pass: true,
            details,
        }
    }

    pub fn with_detail(mut self, key: &str, value: &str) -> Self {
        self.details.insert(key.to_string(), value.to_string());
        self
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq, Eq)]
pub struct Timings {
    pub total_ms: u128,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub phases_ms: BTreeMap<String, u128>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct Report {
    pub schema: String,
    pub command: String,
    pub instance: String,
    pub kind: String,
    pub max_degree: usize,
    pub resource_limit: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub degrees: Vec<DegreeRow>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub betti: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<CheckResult>,
    /// ℓ¹ operator norms of constructed homotopies, as exact rationals
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub norms: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ops_exercised: Vec<String>,
    pub timings: Timings,
}

impl Report {
    pub fn new(command: &str, instance: &str, kind: &str, max_degree: usize, limit: usize) -> Self {
        Report {
            schema: REPORT_SCHEMA.to_string(),
            command: command.to_string(),
            instance: instance.to_string(),
            kind: kind.to_string(),
            max_degree,
            resource_limit: limit,
            degrees: Vec::new(),
            betti: Vec::new(),
            checks: Vec::new(),
            norms: Vec::new(),
            notes: Vec::new(),
            ops_exercised: Vec::new(),
            timings: Timings::default(),
        }
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn record_op(&mut self, op: &str) {
        if !self.ops_exercised.iter().any(|o| o == op) {
            self.ops_exercised.push(op.to_string());
            self.ops_exercised.sort();
        }
    }

    pub fn push_homology(&mut self, rep: &HomologyReport) {
        for d in &rep.degrees {
            self.degrees.push(DegreeRow {
                degree: d.degree,
                chain_dim: d.chain_dim,
                rank_d_below: d.rank_d_below,
                rank_d: d.rank_d,
                betti: d.betti,
            });
        }
        self.betti = rep.betti_vector();
    }

    pub fn push_norm(&mut self, r: &Rat) {
        self.norms.push(fmt_rat(r));
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Report, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// The report as a JSON value with the timing block removed; two runs
    /// over identical input must agree on this value exactly.
    pub fn content_value(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        v.as_object_mut().expect("object").remove("timings");
        v
    }

    /// Human-readable rendering for the terminal.
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{} `{}` ({}), max degree {}\n",
            self.command, self.instance, self.kind, self.max_degree
        ));
        if !self.degrees.is_empty() {
            out.push_str("  degree  dim C_n  rank d_(n-1)  rank d_n  betti\n");
            for d in &self.degrees {
                out.push_str(&format!(
                    "  {:>6}  {:>7}  {:>12}  {:>8}  {:>5}\n",
                    d.degree, d.chain_dim, d.rank_d_below, d.rank_d, d.betti
                ));
            }
        } else if !self.betti.is_empty() {
            out.push_str(&format!("  betti: {:?}\n", self.betti));
        }
        for c in &self.checks {
            let verdict = if let Some(why) = c.details.get("skipped") {
                format!("SKIP ({why})")
            } else if c.pass {
                "PASS".to_string()
            } else {
                format!(
                    "FAIL ({})",
                    c.details.get("reason").map(String::as_str).unwrap_or("")
                )
            };
            out.push_str(&format!("  {:<40} {}\n", c.name, verdict));
            for (k, v) in &c.details {
                if k != "skipped" && k != "reason" {
                    out.push_str(&format!("      {k}: {v}\n"));
                }
            }
        }
        if !self.norms.is_empty() {
            out.push_str(&format!("  homotopy norms: {}\n", self.norms.join(", ")));
        }
        for n in &self.notes {
            out.push_str(&format!("  note: {n}\n"));
        }
        out
    }
}
