//! Machine-readable run reports and fixed-format CSV output.
//!
//! Every command emits one JSON report `{command, config_echo, results,
//! checks}`. Floats in CSV files are printed with 17 significant digits in
//! scientific notation so repeated runs are byte-identical.

use serde::Serialize;

use crate::config::RunConfig;

#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub config_echo: RunConfig,
    pub results: serde_json::Value,
    pub checks: Vec<Check>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    /// Signed distance to the acceptance threshold; positive passes.
    pub margin: f64,
    /// Short tag of the certified relation.
    pub paper_ref: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<bool>,
}

impl Check {
    pub fn new(name: &str, pass: bool, margin: f64, tag: &str) -> Self {
        Self {
            name: name.to_string(),
            pass,
            margin,
            paper_ref: tag.to_string(),
            skipped: None,
        }
    }

    pub fn skipped(name: &str, tag: &str) -> Self {
        Self {
            name: name.to_string(),
            pass: true,
            margin: 0.0,
            paper_ref: tag.to_string(),
            skipped: Some(true),
        }
    }
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialization");
        s.push('\n');
        s
    }
}

/// 17 significant digits, scientific notation.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// CSV cell for an optional float; absent values print as empty cells.
pub fn fmt_opt_f64(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}
