//! Result records and flat tables.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::CliError;

/// Round-trip decimal form of a real: the shortest string that parses back
/// to the same value.
pub fn real(v: f64) -> String {
    format!("{v:?}")
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table { header: header.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<Vec<u8>, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let csv_err = |e: csv::Error| CliError::Io(e.to_string());
        w.write_record(&self.header).map_err(csv_err)?;
        for row in &self.rows {
            w.write_record(row).map_err(csv_err)?;
        }
        w.into_inner().map_err(|e| CliError::Io(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), passed, detail: detail.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Timing {
    pub stage: String,
    pub seconds: f64,
}

/// The structured record written as `result.<kind>.json`.
#[derive(Debug, Clone, Serialize)]
pub struct ResultRecord {
    pub artifact: &'static str,
    pub version: &'static str,
    pub kind: &'static str,
    pub config: serde_json::Value,
    pub outputs: serde_json::Map<String, serde_json::Value>,
    pub checks: Vec<Check>,
    /// Wall-clock seconds per stage; the only field that varies between runs.
    pub timing: Vec<Timing>,
}

pub struct WrittenFiles {
    pub record: PathBuf,
    pub table: PathBuf,
}

pub fn write(dir: &Path, record: &ResultRecord, table: &Table) -> Result<WrittenFiles, CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    let record_path = dir.join(format!("result.{}.json", record.kind));
    let table_path = dir.join("table.csv");
    let json = serde_json::to_vec_pretty(record).map_err(|e| CliError::Io(e.to_string()))?;
    fs::write(&record_path, json).map_err(|e| CliError::Io(format!("{}: {e}", record_path.display())))?;
    fs::write(&table_path, table.to_csv()?).map_err(|e| CliError::Io(format!("{}: {e}", table_path.display())))?;
    Ok(WrittenFiles { record: record_path, table: table_path })
}
