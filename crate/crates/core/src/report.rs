//! Verification report assembly and rendering.
//!
//! A report is a plain serializable record of one verification run: the
//! configuration that produced it, every check with its residual and
//! tolerance, the checks that were skipped with reasons, tally counts, and
//! content hashes of the embedded model data.  The JSON form is the source
//! of truth; the markdown rendering is derived from the serialized JSON
//! value, never assembled from the in-memory structures directly, so the
//! two can never drift apart.
//!
//! Reports are diffable: the timestamp lives in a single top-level field
//! and [`Report::body_json`] serializes everything except it, so two runs
//! with the same configuration and seed produce byte-identical bodies.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::IsoError;
use crate::identities::Residual;
use crate::models::embedded_model_data;
use crate::Result;

/// Version of the report JSON layout.
pub const REPORT_SCHEMA: u32 = 1;

/// One executed check: an identity or consistency residual with the
/// tolerance it was held to.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckEntry {
    /// Stable check name, `suite/check` style; also the tolerance-override key.
    pub name: String,
    /// Worst residual observed for this check across all evaluation points.
    pub value: f64,
    /// Tolerance the residual was compared against.
    pub tol: f64,
    /// Whether the check passed (`value` finite and strictly below `tol`).
    pub pass: bool,
    /// Human-readable locator for the worst case (point index, tuple, ...).
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub context: String,
    /// Non-fatal notes attached during evaluation.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl CheckEntry {
    /// Wraps a residual under its final report name.
    pub fn from_residual(name: impl Into<String>, r: &Residual) -> Self {
        CheckEntry {
            name: name.into(),
            value: r.value,
            tol: r.tol,
            pass: r.pass(),
            context: r.context.clone(),
            warnings: Vec::new(),
        }
    }

    pub fn new(name: impl Into<String>, value: f64, tol: f64) -> Self {
        CheckEntry {
            name: name.into(),
            value,
            tol,
            pass: value.is_finite() && value < tol,
            context: String::new(),
            warnings: Vec::new(),
        }
    }

    pub fn with_context(mut self, context: impl Into<String>) -> Self {
        self.context = context.into();
        self
    }
}

/// A check or suite that did not apply to the requested model.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SkippedEntry {
    pub name: String,
    pub reason: String,
}

/// Tally of the check list; the counts always equal the list totals.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
    pub warnings: usize,
}

/// Artifact and data versions for provenance: crate version plus a SHA-256
/// digest of every embedded model data file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Versions {
    pub artifact: String,
    pub model_data: std::collections::BTreeMap<String, String>,
}

impl Versions {
    /// Versions of the running artifact and its embedded data.
    pub fn current() -> Self {
        let mut model_data = std::collections::BTreeMap::new();
        for (name, json) in embedded_model_data() {
            model_data.insert((*name).to_string(), sha256_hex(json.as_bytes()));
        }
        Versions {
            artifact: env!("CARGO_PKG_VERSION").to_string(),
            model_data,
        }
    }
}

/// Hex-encoded SHA-256 digest.
pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let digest = hasher.finalize();
    let mut out = String::with_capacity(64);
    for b in digest {
        out.push_str(&format!("{b:02x}"));
    }
    out
}

/// Complete record of one verification run.
///
/// `config` is an echo of the run configuration serialized by the caller,
/// so the report type does not depend on the runner types.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    /// Generation timestamp, isolated here so report bodies stay diffable.
    pub generated_at: String,
    pub config: serde_json::Value,
    pub checks: Vec<CheckEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub skipped: Vec<SkippedEntry>,
    pub summary: Summary,
    pub versions: Versions,
}

impl Report {
    /// Assembles a report from raw parts: sorts the checks and skips by
    /// name, recomputes the summary, and stamps versions.
    pub fn assemble(
        config: serde_json::Value,
        mut checks: Vec<CheckEntry>,
        mut skipped: Vec<SkippedEntry>,
    ) -> Self {
        checks.sort_by(|a, b| a.name.cmp(&b.name));
        skipped.sort_by(|a, b| a.name.cmp(&b.name));
        let summary = Summary {
            passed: checks.iter().filter(|c| c.pass).count(),
            failed: checks.iter().filter(|c| !c.pass).count(),
            warnings: checks.iter().map(|c| c.warnings.len()).sum(),
        };
        Report {
            schema: REPORT_SCHEMA,
            generated_at: timestamp(),
            config,
            checks,
            skipped,
            summary,
            versions: Versions::current(),
        }
    }

    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }

    /// Full JSON rendering, timestamp included.
    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| IsoError::Json {
            what: "report".into(),
            source: e,
        })
    }

    /// JSON rendering of the report body: everything except the timestamp.
    /// Two runs with identical configuration produce byte-identical bodies.
    pub fn body_json(&self) -> Result<String> {
        let mut value = serde_json::to_value(self).map_err(|e| IsoError::Json {
            what: "report".into(),
            source: e,
        })?;
        if let Some(map) = value.as_object_mut() {
            map.remove("generated_at");
        }
        serde_json::to_string_pretty(&value).map_err(|e| IsoError::Json {
            what: "report body".into(),
            source: e,
        })
    }

    /// Markdown rendering, derived from the serialized JSON value.
    pub fn to_markdown(&self) -> Result<String> {
        let value = serde_json::to_value(self).map_err(|e| IsoError::Json {
            what: "report".into(),
            source: e,
        })?;
        markdown_from_json(&value)
    }
}

fn timestamp() -> String {
    // Seconds since the Unix epoch, rendered as a UTC calendar date-time.
    // Implemented over std only; the civil conversion is the standard
    // days-from-epoch algorithm.
    let secs = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let days = secs / 86_400;
    let rem = secs % 86_400;
    let (h, m, s) = (rem / 3600, (rem % 3600) / 60, rem % 60);
    let (y, mo, d) = civil_from_days(days as i64);
    format!("{y:04}-{mo:02}-{d:02}T{h:02}:{m:02}:{s:02}Z")
}

/// Gregorian date from days since 1970-01-01 (Howard Hinnant's algorithm).
fn civil_from_days(z: i64) -> (i64, u32, u32) {
    let z = z + 719_468;
    let era = if z >= 0 { z } else { z - 146_096 } / 146_097;
    let doe = z - era * 146_097;
    let yoe = (doe - doe / 1460 + doe / 36_524 - doe / 146_096) / 365;
    let y = yoe + era * 400;
    let doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    let mp = (5 * doy + 2) / 153;
    let d = (doy - (153 * mp + 2) / 5 + 1) as u32;
    let m = if mp < 10 { mp + 3 } else { mp - 9 } as u32;
    (if m <= 2 { y + 1 } else { y }, m, d)
}

/// Renders a serialized report value as markdown.  Works from the JSON
/// value alone so the rendering can never disagree with the JSON export.
pub fn markdown_from_json(value: &serde_json::Value) -> Result<String> {
    use std::fmt::Write as _;
    let obj = value
        .as_object()
        .ok_or_else(|| IsoError::Config("report value is not a JSON object".into()))?;
    let str_of = |v: &serde_json::Value| -> String {
        match v {
            serde_json::Value::String(s) => s.clone(),
            other => other.to_string(),
        }
    };
    let mut md = String::new();
    let _ = writeln!(md, "# Verification report");
    let _ = writeln!(md);
    if let Some(ts) = obj.get("generated_at") {
        let _ = writeln!(md, "- generated: {}", str_of(ts));
    }
    if let Some(cfg) = obj.get("config").and_then(|c| c.as_object()) {
        let mut parts: Vec<String> = Vec::new();
        for (k, v) in cfg {
            parts.push(format!("{k}={}", str_of(v)));
        }
        let _ = writeln!(md, "- config: {}", parts.join(", "));
    }
    if let Some(versions) = obj.get("versions").and_then(|v| v.as_object()) {
        if let Some(a) = versions.get("artifact") {
            let _ = writeln!(md, "- artifact: {}", str_of(a));
        }
        if let Some(data) = versions.get("model_data").and_then(|d| d.as_object()) {
            for (name, hash) in data {
                let short: String = str_of(hash).chars().take(12).collect();
                let _ = writeln!(md, "- data {name}: {short}");
            }
        }
    }
    let _ = writeln!(md);
    let _ = writeln!(md, "| check | residual | tolerance | status |");
    let _ = writeln!(md, "|---|---|---|---|");
    if let Some(checks) = obj.get("checks").and_then(|c| c.as_array()) {
        for check in checks {
            let name = check.get("name").map(&str_of).unwrap_or_default();
            let value = check
                .get("value")
                .and_then(|v| v.as_f64())
                .unwrap_or(f64::NAN);
            let tol = check
                .get("tol")
                .and_then(|v| v.as_f64())
                .unwrap_or(f64::NAN);
            let pass = check.get("pass").and_then(|v| v.as_bool()).unwrap_or(false);
            let status = if pass { "pass" } else { "FAIL" };
            let _ = writeln!(md, "| {name} | {value:.3e} | {tol:.1e} | {status} |");
        }
    }
    if let Some(skipped) = obj.get("skipped").and_then(|c| c.as_array()) {
        if !skipped.is_empty() {
            let _ = writeln!(md);
            let _ = writeln!(md, "## Skipped");
            let _ = writeln!(md);
            for entry in skipped {
                let name = entry.get("name").map(&str_of).unwrap_or_default();
                let reason = entry.get("reason").map(&str_of).unwrap_or_default();
                let _ = writeln!(md, "- {name}: {reason}");
            }
        }
    }
    if let Some(summary) = obj.get("summary").and_then(|s| s.as_object()) {
        let _ = writeln!(md);
        let _ = writeln!(
            md,
            "**{} passed, {} failed, {} warnings**",
            summary.get("passed").and_then(|v| v.as_u64()).unwrap_or(0),
            summary.get("failed").and_then(|v| v.as_u64()).unwrap_or(0),
            summary
                .get("warnings")
                .and_then(|v| v.as_u64())
                .unwrap_or(0)
        );
    }
    Ok(md)
}
