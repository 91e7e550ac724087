//! Deterministic run reports.
//!
//! A report collects the echoed configuration, the seed, gate verdicts and
//! named results, and serializes to JSON with insertion-ordered keys and
//! shortest round-trip float formatting, so identical configurations produce
//! byte-identical files. CSV tables are written row by row with the same
//! float formatting.

use serde::Serialize;
use serde_json::{Map, Value};
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize)]
pub struct GateNote {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// One run's verdicts and numbers, ready for serialization.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub seed: u64,
    pub config: Value,
    pub gates: Vec<GateNote>,
    pub results: Map<String, Value>,
}

impl Report {
    pub fn new(command: &str, seed: u64, config: Value) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            seed,
            config,
            gates: Vec::new(),
            results: Map::new(),
        }
    }

    pub fn add_gate(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.gates.push(GateNote { name: name.to_string(), passed, detail: detail.into() });
    }

    pub fn add_result(&mut self, key: &str, value: impl Serialize) -> Result<()> {
        let v = serde_json::to_value(value)
            .map_err(|e| Error::rejected(format!("unserializable result {key}: {e}")))?;
        self.results.insert(key.to_string(), v);
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        write_text(path, &self.to_json())
    }
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    let mut file = std::fs::File::create(path)
        .map_err(|e| Error::rejected(format!("cannot create {}: {e}", path.display())))?;
    file.write_all(text.as_bytes())
        .map_err(|e| Error::rejected(format!("cannot write {}: {e}", path.display())))
}

/// Write a CSV table; every cell is already formatted.
pub fn write_csv_table(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut text = String::new();
    text.push_str(&header.join(","));
    text.push('\n');
    for row in rows {
        if row.len() != header.len() {
            return Err(Error::rejected("CSV row width does not match the header"));
        }
        text.push_str(&row.join(","));
        text.push('\n');
    }
    write_text(path, &text)
}

/// Shortest round-trip decimal formatting for table cells.
pub fn fmt_f64(v: f64) -> String {
    let mut s = format!("{v}");
    if !s.contains('.') && !s.contains('e') && !s.contains("inf") && !s.contains("NaN") {
        s.push_str(".0");
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_reports_serialize_identically() {
        let build = || {
            let mut r = Report::new("probe", 42, serde_json::json!({"n": 64, "tol": 1e-6}));
            r.add_gate("condition", true, "1.06 <= 1e8");
            r.add_result("residual", 1.64e-7).unwrap();
            r.add_result("curve", vec![1.0, 0.5, 0.25]).unwrap();
            r.to_json()
        };
        assert_eq!(build(), build());
    }

    #[test]
    fn float_formatting_round_trips() {
        for v in [0.1, 1.0 / 3.0, 1e-300, 123456.789, -0.0, 2.0f64.powi(-40)] {
            let s = fmt_f64(v);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back.to_bits(), v.to_bits(), "{s}");
        }
    }

    #[test]
    fn csv_rows_must_match_header() {
        let dir = std::env::temp_dir().join("atomkit-report-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("t.csv");
        let bad = write_csv_table(&path, &["a", "b"], &[vec!["1".into()]]);
        assert!(bad.is_err());
        write_csv_table(&path, &["a", "b"], &[vec!["1".into(), "2".into()]]).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text, "a,b\n1,2\n");
    }
}
