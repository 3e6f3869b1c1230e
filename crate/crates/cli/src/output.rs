//! Writing tables as RFC-4180 CSV (reals to 17 significant digits) and the
//! JSON metadata that accompanies every run.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

use crate::args::Format;
use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Real(f64),
    Int(u64),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Self::Real(x) => real(*x),
            Self::Int(k) => k.to_string(),
            Self::Text(s) => s.clone(),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Self::Real(x)
    }
}

impl From<usize> for Cell {
    fn from(k: usize) -> Self {
        Self::Int(k as u64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Self::Text(s.to_string())
    }
}

/// Seventeen significant digits, enough to round-trip any `f64`.
pub fn real(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

/// A named table. Tables without a header are plain numeric matrices whose
/// layout is described in the metadata.
#[derive(Debug, Clone, Serialize)]
pub struct Table {
    pub name: String,
    pub header: Option<Vec<String>>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &str, header: &[&str]) -> Self {
        Self { name: name.to_string(), header: Some(header.iter().map(|s| s.to_string()).collect()), rows: Vec::new() }
    }

    pub fn matrix(name: &str) -> Self {
        Self { name: name.to_string(), header: None, rows: Vec::new() }
    }

    pub fn push<I: IntoIterator<Item = Cell>>(&mut self, row: I) {
        self.rows.push(row.into_iter().collect());
    }
}

/// Collects a run's tables and metadata and writes them on `finish`.
pub struct Run {
    command: String,
    dir: PathBuf,
    format: Format,
    started: Instant,
    tables: Vec<Table>,
}

impl Run {
    pub fn new(command: &str, dir: &Path, format: Format) -> Self {
        Self { command: command.to_string(), dir: dir.to_path_buf(), format, started: Instant::now(), tables: Vec::new() }
    }

    pub fn add(&mut self, table: Table) {
        self.tables.push(table);
    }

    /// Writes the data and metadata; returns the paths written.
    pub fn finish<P: Serialize>(self, seed: Option<u64>, parameters: &P, results: Value) -> Result<Vec<PathBuf>, CliError> {
        fs::create_dir_all(&self.dir)?;
        let mut written = Vec::new();
        let mut tables_meta = Vec::new();
        for t in &self.tables {
            let rows = t.rows.len();
            let cols = t.rows.first().map_or(0, Vec::len);
            match self.format {
                Format::Csv => {
                    let path = self.dir.join(format!("{}.csv", t.name));
                    write_csv(&path, t)?;
                    tables_meta.push(json!({
                        "name": t.name, "file": file_name(&path), "header": t.header, "rows": rows, "columns": cols,
                    }));
                    written.push(path);
                }
                Format::Json => tables_meta.push(json!({
                    "name": t.name, "header": t.header, "rows": rows, "columns": cols, "data": t.rows,
                })),
            }
        }
        let meta = json!({
            "tool": "bgue",
            "version": env!("CARGO_PKG_VERSION"),
            "command": self.command,
            "seed": seed,
            "parameters": parameters,
            "threads": rayon::current_num_threads(),
            "wall_time_seconds": self.started.elapsed().as_secs_f64(),
            "tables": tables_meta,
            "results": results,
        });
        let path = self.dir.join(format!("{}.json", self.command));
        let text = serde_json::to_string_pretty(&meta).map_err(|e| CliError::Io(e.to_string()))?;
        fs::write(&path, text + "\n")?;
        written.push(path);
        Ok(written)
    }
}

fn file_name(p: &Path) -> String {
    p.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

fn write_csv(path: &Path, table: &Table) -> Result<(), CliError> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_path(path)?;
    if let Some(h) = &table.header {
        w.write_record(h)?;
    }
    for row in &table.rows {
        w.write_record(row.iter().map(Cell::render))?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reals_round_trip() {
        for x in [0.1, -1.0 / 3.0, 6.02214076e23, 5e-324, 0.0] {
            let s = real(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
        }
        assert_eq!(real(1.5), "1.5000000000000000e0");
    }
}
