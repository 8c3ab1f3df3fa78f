//! Run outputs: files are accumulated in memory and flushed together once
//! the command succeeds, so a failed run leaves no partial artifacts. Every
//! run also writes a JSON manifest echoing the configuration, seed, and the
//! list of emitted files.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use serde::Serialize;

pub struct RunOutput {
    dir: PathBuf,
    command: String,
    seed: u64,
    threads: usize,
    config: serde_json::Value,
    files: Vec<(String, Vec<u8>)>,
    started: Instant,
}

#[derive(Serialize)]
struct Manifest<'a> {
    command: &'a str,
    version: &'a str,
    seed: u64,
    threads: usize,
    config: &'a serde_json::Value,
    outputs: Vec<&'a str>,
    wall_ms: u128,
}

impl RunOutput {
    pub fn new(
        dir: &Path,
        command: &str,
        seed: u64,
        threads: usize,
        config: impl Serialize,
    ) -> Result<Self> {
        Ok(Self {
            dir: dir.to_path_buf(),
            command: command.to_string(),
            seed,
            threads,
            config: serde_json::to_value(config)?,
            files: Vec::new(),
            started: Instant::now(),
        })
    }

    pub fn add_file(&mut self, name: &str, bytes: Vec<u8>) {
        self.files.push((name.to_string(), bytes));
    }

    pub fn add_csv(&mut self, name: &str, table: &Table) {
        self.add_file(name, table.to_csv().into_bytes());
    }

    pub fn add_json(&mut self, name: &str, value: &impl Serialize) -> Result<()> {
        let mut bytes = serde_json::to_vec_pretty(value)?;
        bytes.push(b'\n');
        self.add_file(name, bytes);
        Ok(())
    }

    /// Write all data files, then the manifest referencing them.
    pub fn finish(self) -> Result<()> {
        fs::create_dir_all(&self.dir)
            .with_context(|| format!("creating output dir {}", self.dir.display()))?;
        for (name, bytes) in &self.files {
            let path = self.dir.join(name);
            fs::write(&path, bytes).with_context(|| format!("writing {}", path.display()))?;
            println!("wrote {}", path.display());
        }
        let manifest = Manifest {
            command: &self.command,
            version: env!("CARGO_PKG_VERSION"),
            seed: self.seed,
            threads: self.threads,
            config: &self.config,
            outputs: self.files.iter().map(|(n, _)| n.as_str()).collect(),
            wall_ms: self.started.elapsed().as_millis(),
        };
        let path = self.dir.join("manifest.json");
        let mut bytes = serde_json::to_vec_pretty(&manifest)?;
        bytes.push(b'\n');
        fs::write(&path, bytes).with_context(|| format!("writing {}", path.display()))?;
        println!("wrote {}", path.display());
        Ok(())
    }
}

/// A uniform table rendered as CSV or JSON rows, with shortest-roundtrip
/// float formatting so reruns are byte-identical.
pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

#[derive(Clone)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, cells: Vec<Cell>) {
        assert_eq!(cells.len(), self.header.len(), "column count mismatch");
        self.rows.push(cells);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let rendered: Vec<String> = row
                .iter()
                .map(|c| match c {
                    Cell::Int(v) => v.to_string(),
                    Cell::Float(v) => format_float(*v),
                    Cell::Text(v) => v.clone(),
                })
                .collect();
            out.push_str(&rendered.join(","));
            out.push('\n');
        }
        out
    }

    /// Rows as an array of JSON objects keyed by the header, with numeric
    /// cells kept numeric.
    pub fn to_json_rows(&self) -> serde_json::Value {
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|row| {
                let map: serde_json::Map<String, serde_json::Value> = self
                    .header
                    .iter()
                    .zip(row)
                    .map(|(k, cell)| {
                        let value = match cell {
                            Cell::Int(v) => serde_json::Value::from(*v),
                            Cell::Float(v) => serde_json::Number::from_f64(*v)
                                .map(serde_json::Value::Number)
                                .unwrap_or(serde_json::Value::Null),
                            Cell::Text(v) => serde_json::Value::String(v.clone()),
                        };
                        (k.clone(), value)
                    })
                    .collect();
                serde_json::Value::Object(map)
            })
            .collect();
        serde_json::Value::Array(rows)
    }
}

fn format_float(v: f64) -> String {
    if v == v.trunc() && v.abs() < 1e15 {
        // keep integral values readable
        format!("{v:.1}")
    } else {
        format!("{v}")
    }
}

/// Output format for tabular data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn write(&self, out: &mut RunOutput, stem: &str, table: &Table) -> Result<()> {
        match self {
            Format::Csv => {
                out.add_csv(&format!("{stem}.csv"), table);
                Ok(())
            }
            Format::Json => out.add_json(&format!("{stem}.json"), &table.to_json_rows()),
        }
    }
}
