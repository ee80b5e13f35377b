use std::io::Write;
use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

/// One executed check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub index: usize,
    pub op: &'static str,
    pub label: Option<String>,
    /// sha256 of the check and every spec it references.
    pub inputs_digest: String,
    pub pass: bool,
    /// Largest observed discrepancy, when the check has one.
    pub residual: Option<f64>,
    /// Quadrature error accounting for the residual.
    pub budget: Option<f64>,
    /// Acceptance threshold from the scenario.
    pub tolerance: Option<f64>,
    pub error: Option<String>,
    pub values: serde_json::Value,
    #[serde(skip)]
    pub tables: Vec<Table>,
}

/// A CSV artifact attached to a check.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: &'static str,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &'static str, header: Vec<&'static str>) -> Self {
        Self {
            name,
            header,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn write_csv(&self, out: impl Write) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Deterministic report payload.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub scenario: String,
    pub pass: bool,
    pub checks: Vec<CheckRecord>,
}

/// Run environment, kept apart from the payload.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Metadata {
    pub tool_version: &'static str,
    pub os: &'static str,
    pub arch: &'static str,
    pub jobs: usize,
    pub started_unix_seconds: u64,
    pub wall_clock_seconds: f64,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// One line per check.
    pub fn summary_csv(&self) -> String {
        let mut buf = Vec::new();
        {
            let mut w = csv::Writer::from_writer(&mut buf);
            w.write_record([
                "index",
                "op",
                "label",
                "pass",
                "residual",
                "budget",
                "tolerance",
                "error",
                "inputs_digest",
            ])
            .expect("in-memory write");
            for c in &self.checks {
                w.write_record([
                    c.index.to_string(),
                    c.op.to_string(),
                    c.label.clone().unwrap_or_default(),
                    c.pass.to_string(),
                    opt(c.residual),
                    opt(c.budget),
                    opt(c.tolerance),
                    c.error.clone().unwrap_or_default(),
                    c.inputs_digest.clone(),
                ])
                .expect("in-memory write");
            }
            w.flush().expect("in-memory write");
        }
        String::from_utf8(buf).expect("csv is utf-8")
    }

    /// Writes report.json, summary.csv and every check table into `dir`.
    pub fn write_artifacts(&self, dir: &Path, metadata: &Metadata) -> std::io::Result<()> {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("report.json"), self.to_json())?;
        std::fs::write(dir.join("summary.csv"), self.summary_csv())?;
        let meta = serde_json::to_string_pretty(metadata).expect("metadata serializes");
        std::fs::write(dir.join("metadata.json"), meta + "\n")?;
        for c in &self.checks {
            for t in &c.tables {
                let path = dir.join(format!("check{:03}_{}_{}.csv", c.index, c.op, t.name));
                let file = std::fs::File::create(path)?;
                t.write_csv(std::io::BufWriter::new(file))
                    .map_err(std::io::Error::other)?;
            }
        }
        Ok(())
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

pub fn digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}
