//! Deterministic verification reports.
//!
//! A report is a flat list of named checks plus the configuration that
//! produced them.  Serialization is canonical: struct fields are declared
//! in alphabetical order so the JSON keys come out sorted at every level,
//! and checks are sorted by name so assembly order never shows.  The only
//! non-reproducible fields are wall-clock times and cache hits; both are
//! masked by [`Report::canonical_bytes`] so byte-level comparison of two
//! runs sees mathematical content only.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Outcome of a single check.
///
/// `EvidenceOnly` marks a bounded semi-decision that came out as expected:
/// the search found nothing within its bound.  It is deliberately distinct
/// from `Pass` so finite evidence is never misread as a proof.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CheckStatus {
    #[serde(rename = "pass")]
    Pass,
    #[serde(rename = "fail")]
    Fail,
    #[serde(rename = "evidence-only")]
    EvidenceOnly,
}

impl CheckStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
            CheckStatus::EvidenceOnly => "evidence-only",
        }
    }
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // pad, not write_str, so table columns can width-format the status
        f.pad(self.as_str())
    }
}

/// One named verification result.  Field order is alphabetical so the
/// serialized keys are sorted.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Check {
    pub details: String,
    pub name: String,
    pub runtime_ms: u64,
    pub status: CheckStatus,
}

/// A suite run: configuration echo, checks, and the verdict.  Field order
/// is alphabetical so the serialized keys are sorted.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub cache_hits: u64,
    pub checks: Vec<Check>,
    pub config: BTreeMap<String, String>,
    pub overall: String,
    pub suite: String,
    pub version: String,
}

impl Report {
    pub fn new(suite: &str, config: BTreeMap<String, String>) -> Report {
        Report {
            cache_hits: 0,
            checks: Vec::new(),
            config,
            overall: "pass".to_string(),
            suite: suite.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    /// Sorts the checks and settles the verdict: `fail` exactly when some
    /// check failed.  Evidence-only results do not fail a report.
    pub fn finalize(&mut self) {
        self.checks.sort_by(|a, b| a.name.cmp(&b.name));
        self.overall = if self.has_failure() { "fail" } else { "pass" }.to_string();
    }

    pub fn has_failure(&self) -> bool {
        self.checks.iter().any(|c| c.status == CheckStatus::Fail)
    }

    /// Serialized form with sorted keys, ending in a newline.
    pub fn to_json_bytes(&self) -> Vec<u8> {
        let mut out = serde_json::to_vec_pretty(self).expect("report serializes");
        out.push(b'\n');
        out
    }

    /// Serialized form with the run-dependent fields masked: wall-clock
    /// times and cache hits are zeroed.  Two runs of the same configuration
    /// and seed produce identical canonical bytes.
    pub fn canonical_bytes(&self) -> Vec<u8> {
        let mut masked = self.clone();
        masked.cache_hits = 0;
        for c in &mut masked.checks {
            c.runtime_ms = 0;
        }
        masked.to_json_bytes()
    }

    pub fn from_json_bytes(bytes: &[u8]) -> Result<Report> {
        serde_json::from_slice(bytes).map_err(|e| Error::Parse(format!("bad report JSON: {e}")))
    }

    /// Human-readable table of the same data.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "suite: {}    version: {}    overall: {}\n",
            self.suite, self.version, self.overall
        ));
        let cfg: Vec<String> = self
            .config
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        out.push_str(&format!("config: {}\n", cfg.join(" ")));
        out.push_str(&format!("cache hits: {}\n", self.cache_hits));
        if self.checks.is_empty() {
            out.push_str("warning: empty check list, nothing was verified\n");
            return out;
        }
        let name_w = self
            .checks
            .iter()
            .map(|c| c.name.len())
            .max()
            .unwrap_or(4)
            .max(4);
        out.push_str(&format!(
            "{:name_w$}  {:13}  {:>8}  details\n",
            "name", "status", "time"
        ));
        for c in &self.checks {
            out.push_str(&format!(
                "{:name_w$}  {:13}  {:>6}ms  {}\n",
                c.name, c.status, c.runtime_ms, c.details
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut config = BTreeMap::new();
        config.insert("p".to_string(), "5".to_string());
        config.insert("depth".to_string(), "4".to_string());
        let mut r = Report::new("cind-core", config);
        r.push(Check {
            details: "second".to_string(),
            name: "b-check".to_string(),
            runtime_ms: 12,
            status: CheckStatus::EvidenceOnly,
        });
        r.push(Check {
            details: "first".to_string(),
            name: "a-check".to_string(),
            runtime_ms: 7,
            status: CheckStatus::Pass,
        });
        r.finalize();
        r
    }

    #[test]
    fn checks_are_sorted_and_evidence_does_not_fail() {
        let r = sample();
        assert_eq!(r.checks[0].name, "a-check");
        assert_eq!(r.checks[1].name, "b-check");
        assert_eq!(r.overall, "pass");
        assert!(!r.has_failure());
    }

    #[test]
    fn any_fail_fails_the_report() {
        let mut r = sample();
        r.push(Check {
            details: String::new(),
            name: "c-check".to_string(),
            runtime_ms: 0,
            status: CheckStatus::Fail,
        });
        r.finalize();
        assert_eq!(r.overall, "fail");
    }

    #[test]
    fn empty_report_passes_with_warning() {
        let mut r = Report::new("cind-core", BTreeMap::new());
        r.finalize();
        assert_eq!(r.overall, "pass");
        assert!(r.render_text().contains("warning: empty check list"));
    }

    #[test]
    fn json_keys_are_sorted_and_round_trip() {
        let r = sample();
        let bytes = r.to_json_bytes();
        let text = String::from_utf8(bytes.clone()).unwrap();
        // Top level and per-check keys appear in alphabetical order.
        let order = ["cache_hits", "checks", "config", "overall", "suite", "version"];
        let mut last = 0;
        for key in order {
            let pos = text.find(&format!("\"{key}\"")).expect("key present");
            assert!(pos >= last, "{key} out of order");
            last = pos;
        }
        let check_order = ["details", "name", "runtime_ms", "status"];
        let mut last = 0;
        for key in check_order {
            let pos = text.find(&format!("\"{key}\"")).expect("key present");
            assert!(pos >= last, "{key} out of order");
            last = pos;
        }
        let back = Report::from_json_bytes(&bytes).unwrap();
        assert_eq!(back.to_json_bytes(), bytes);
    }

    #[test]
    fn canonical_bytes_mask_run_dependent_fields() {
        let mut a = sample();
        let mut b = sample();
        a.cache_hits = 3;
        b.checks[0].runtime_ms = 999;
        assert_eq!(a.canonical_bytes(), b.canonical_bytes());
        assert_ne!(a.to_json_bytes(), b.to_json_bytes());
    }

    #[test]
    fn status_strings_round_trip() {
        for s in [CheckStatus::Pass, CheckStatus::Fail, CheckStatus::EvidenceOnly] {
            let j = serde_json::to_string(&s).unwrap();
            assert_eq!(j, format!("\"{}\"", s.as_str()));
            let back: CheckStatus = serde_json::from_str(&j).unwrap();
            assert_eq!(back, s);
        }
    }
}
