//! Scan reports: CSV rows plus JSON metadata.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanReport {
    pub experiment: String,
    /// The mathematical claim the experiment exercises.
    pub paper_ref: String,
    pub seed: u64,
    pub depth: usize,
    pub parameters: BTreeMap<String, String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub notes: Vec<String>,
    /// Seconds since the Unix epoch; only set on request, so that reports
    /// stay byte-identical by default.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
    /// Structured payload (e.g. a ball decomposition).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<Value>,
}

impl ScanReport {
    pub fn new(experiment: &str, paper_ref: &str, seed: u64, depth: usize, columns: &[&str]) -> Self {
        Self {
            experiment: experiment.to_string(),
            paper_ref: paper_ref.to_string(),
            seed,
            depth,
            parameters: BTreeMap::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            notes: Vec::new(),
            timestamp: None,
            detail: None,
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.parameters.insert(key.to_string(), value.to_string());
        self
    }

    pub fn push_row(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.columns.len(), "row width differs from the header");
        self.rows.push(row);
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    /// Index of a named column.
    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        let bytes = w.into_inner().context("flushing CSV")?;
        Ok(String::from_utf8(bytes)?)
    }

    pub fn to_json(&self) -> Result<String> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        Ok(text)
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv()?).with_context(|| format!("writing {}", path.display()))
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?).with_context(|| format!("writing {}", path.display()))
    }
}

/// Fixed-precision decimal for estimate columns.
pub fn decimal(x: f64) -> String {
    format!("{x:.6}")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ScanReport {
        let mut r = ScanReport::new("demo", "a claim", 7, 5, &["n", "ratio"]);
        r.param("height", "11/64");
        r.push_row(vec!["3".into(), "5/16".into()]);
        r.push_row(vec!["4".into(), "a,b".into()]);
        r
    }

    #[test]
    fn csv_has_header_and_quotes() {
        assert_eq!(sample().to_csv().unwrap(), "n,ratio\n3,5/16\n4,\"a,b\"\n");
    }

    #[test]
    fn json_carries_metadata() {
        let v: Value = serde_json::from_str(&sample().to_json().unwrap()).unwrap();
        assert_eq!(v["paper_ref"], "a claim");
        assert_eq!(v["seed"], 7);
        assert_eq!(v["parameters"]["height"], "11/64");
        assert!(v.get("timestamp").is_none());
    }

    #[test]
    #[should_panic(expected = "row width")]
    fn ragged_rows_rejected() {
        sample().push_row(vec!["1".into()]);
    }
}
