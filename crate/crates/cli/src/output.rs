//! Tables, their CSV/JSON encodings, and the run manifest.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::ConfigError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Self::Csv => "csv",
            Self::Json => "json",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(usize),
    Float(f64),
    Text(String),
    Bool(bool),
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Self::Int(v)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Self::Float(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Self::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Self::Text(v.to_string())
    }
}

impl Cell {
    /// 17 significant digits, enough to round-trip any `f64`.
    fn text(&self) -> String {
        match self {
            Self::Int(v) => v.to_string(),
            Self::Float(v) => format!("{v:.16e}"),
            Self::Text(s) => s.clone(),
            Self::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Self::Int(v) => json!(v),
            Self::Float(v) if v.is_finite() => json!(v),
            Self::Float(v) => json!(v.to_string()),
            Self::Text(s) => json!(s),
            Self::Bool(b) => json!(b),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub name: String,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: impl Into<String>, columns: &[&'static str]) -> Self {
        Self {
            name: name.into(),
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn encode(&self, format: Format) -> Result<Vec<u8>> {
        match format {
            Format::Csv => {
                let mut w = csv::WriterBuilder::new()
                    .terminator(csv::Terminator::Any(b'\n'))
                    .from_writer(Vec::new());
                w.write_record(&self.columns)?;
                for row in &self.rows {
                    w.write_record(row.iter().map(Cell::text))?;
                }
                Ok(w.into_inner().context("flushing CSV")?)
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|r| {
                        let obj: Map<String, Value> = self
                            .columns
                            .iter()
                            .zip(r)
                            .map(|(c, v)| (c.to_string(), v.json()))
                            .collect();
                        Value::Object(obj)
                    })
                    .collect();
                let mut out = serde_json::to_vec_pretty(&rows)?;
                out.push(b'\n');
                Ok(out)
            }
        }
    }
}

/// Where artifacts go: a directory (with a manifest) or stdout.
pub struct Sink {
    dir: Option<PathBuf>,
    written: Vec<String>,
}

impl Sink {
    /// Creates the directory if needed and proves it writable before any
    /// computation starts.
    pub fn open(dir: Option<&Path>) -> Result<Self> {
        if let Some(dir) = dir {
            fs::create_dir_all(dir).map_err(|e| {
                ConfigError(format!(
                    "cannot create output directory {}: {e}",
                    dir.display()
                ))
            })?;
            let probe = dir.join(".pacflab-write-probe");
            fs::write(&probe, b"").map_err(|e| {
                ConfigError(format!(
                    "output directory {} is not writable: {e}",
                    dir.display()
                ))
            })?;
            let _ = fs::remove_file(&probe);
        }
        Ok(Self {
            dir: dir.map(Path::to_path_buf),
            written: Vec::new(),
        })
    }

    pub fn has_dir(&self) -> bool {
        self.dir.is_some()
    }

    /// Writes `name` into the directory, or to stdout without one.
    pub fn emit(&mut self, name: &str, bytes: &[u8]) -> Result<()> {
        match &self.dir {
            Some(dir) => {
                let path = dir.join(name);
                fs::write(&path, bytes).with_context(|| format!("writing {}", path.display()))?;
                self.written.push(name.to_string());
            }
            None => {
                let mut out = std::io::stdout().lock();
                out.write_all(bytes)?;
                out.flush()?;
            }
        }
        Ok(())
    }

    pub fn emit_table(&mut self, table: &Table, format: Format) -> Result<()> {
        self.emit(
            &format!("{}.{}", table.name, format.extension()),
            &table.encode(format)?,
        )
    }

    /// Writes `manifest.json`; a no-op without a directory.
    pub fn finish(self, mut manifest: Map<String, Value>) -> Result<()> {
        let Some(dir) = self.dir else { return Ok(()) };
        manifest.insert("outputs".into(), json!(self.written));
        let mut text = serde_json::to_vec_pretty(&Value::Object(manifest))?;
        text.push(b'\n');
        let path = dir.join("manifest.json");
        fs::write(&path, text).with_context(|| format!("writing {}", path.display()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trips_floats() {
        let mut t = Table::new("t", &["n", "x"]);
        t.push(vec![1usize.into(), 0.1f64.into()]);
        t.push(vec![2usize.into(), (1.0f64 / 3.0).into()]);
        let text = String::from_utf8(t.encode(Format::Csv).unwrap()).unwrap();
        assert!(!text.contains('\r'));
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "n,x");
        let x: f64 = lines[2].split(',').nth(1).unwrap().parse().unwrap();
        assert_eq!(x, 1.0 / 3.0);
    }

    #[test]
    fn json_rows_are_objects() {
        let mut t = Table::new("t", &["n", "ok"]);
        t.push(vec![3usize.into(), true.into()]);
        let v: Value = serde_json::from_slice(&t.encode(Format::Json).unwrap()).unwrap();
        assert_eq!(v[0]["n"], 3);
        assert_eq!(v[0]["ok"], true);
    }
}
