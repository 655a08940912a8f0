//! Report files. The JSON report and CSV tables are pure functions of the
//! configuration; wall-clock time goes to a separate `*.timing.json`.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::Serialize;

use super::config::{Command, ExperimentConfig};
use crate::error::Result;

pub const TOOL: &str = env!("CARGO_PKG_NAME");
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Serialize)]
struct Envelope<'a, T> {
    tool: &'static str,
    version: &'static str,
    command: Command,
    seed: u64,
    workers: usize,
    pass: bool,
    config: &'a ExperimentConfig,
    result: &'a T,
}

#[derive(Serialize)]
struct Timing {
    command: Command,
    wall_clock_seconds: f64,
}

/// A CSV table: header plus rows of already formatted cells.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, header: &[&str]) -> Self {
        Self {
            name: name.to_string(),
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }
}

pub fn json_report<T: Serialize>(
    command: Command,
    config: &ExperimentConfig,
    pass: bool,
    result: &T,
) -> Result<String> {
    let envelope = Envelope {
        tool: TOOL,
        version: VERSION,
        command,
        seed: config.seed,
        workers: config.workers,
        pass,
        config,
        result,
    };
    let mut s = serde_json::to_string_pretty(&envelope)?;
    s.push('\n');
    Ok(s)
}

pub fn csv_table(table: &Table) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&table.header)?;
    for row in &table.rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(w.into_inner().map_err(|e| e.into_error())?)
}

/// Writes `<command>.json`, one `<name>.csv` per table and
/// `<command>.timing.json`; returns the deterministic files.
pub fn emit<T: Serialize>(
    dir: &Path,
    command: Command,
    config: &ExperimentConfig,
    pass: bool,
    result: &T,
    tables: &[Table],
    elapsed: Duration,
) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut files = Vec::new();
    let json = dir.join(format!("{command}.json"));
    fs::write(&json, json_report(command, config, pass, result)?)?;
    files.push(json);
    for t in tables {
        let path = dir.join(format!("{}.csv", t.name));
        fs::write(&path, csv_table(t)?)?;
        files.push(path);
    }
    let timing = Timing {
        command,
        wall_clock_seconds: elapsed.as_secs_f64(),
    };
    fs::write(
        dir.join(format!("{command}.timing.json")),
        serde_json::to_string_pretty(&timing)? + "\n",
    )?;
    Ok(files)
}

/// `x` with enough digits to round-trip.
pub fn cell(x: f64) -> String {
    format!("{x}")
}
