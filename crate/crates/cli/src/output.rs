//! CSV tables with a `#` metadata header, and the run manifest.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::config::Config;
use crate::error::CliResult;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// One cell of a table row.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(u64),
    Float(f64),
    Text(String),
    Bool(bool),
    Empty,
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Float(x) => format!("{x:.16e}"),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Float(x) => Some(*x),
            Cell::Int(i) => Some(*i as f64),
            _ => None,
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<u64> for Cell {
    fn from(i: u64) -> Self {
        Cell::Int(i)
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Cell::Int(i as u64)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Empty, Cell::Float)
    }
}

/// A named CSV table; `name` becomes `<name>.csv`.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    /// Extra `# key = value` lines after the config echo.
    pub notes: Vec<String>,
}

impl Table {
    pub fn new(name: impl Into<String>, header: Vec<&'static str>) -> Self {
        Self {
            name: name.into(),
            header,
            rows: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| *h == name)
    }

    pub fn file_name(&self) -> String {
        format!("{}.csv", self.name)
    }

    /// Full CSV text: metadata lines, column header, rows.
    pub fn to_csv(&self, config: &Config, seed: u64) -> CliResult<Vec<u8>> {
        let mut buf = Vec::new();
        writeln!(buf, "# experiment = {}", config.str("experiment").unwrap_or("?"))?;
        writeln!(buf, "# seed = {seed}")?;
        writeln!(buf, "# version = {VERSION}")?;
        for line in config.echo() {
            writeln!(buf, "# config.{line}")?;
        }
        for note in &self.notes {
            writeln!(buf, "# {note}")?;
        }
        let mut w = csv::Writer::from_writer(buf);
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render))?;
        }
        w.into_inner().map_err(|e| e.into_error().into())
    }
}

/// Writes every table under `dir` plus `manifest.toml`; returns the paths written.
pub fn write_all(dir: &Path, config: &Config, seed: u64, tables: &[Table]) -> CliResult<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    for t in tables {
        let path = dir.join(t.file_name());
        fs::write(&path, t.to_csv(config, seed)?)?;
        written.push(path);
    }
    let path = dir.join("manifest.toml");
    fs::write(&path, manifest(config, seed, tables))?;
    written.push(path);
    Ok(written)
}

fn manifest(config: &Config, seed: u64, tables: &[Table]) -> String {
    let mut out = String::new();
    out.push_str(&format!("version = \"{VERSION}\"\n"));
    out.push_str(&format!("seed = {seed}\n"));
    let files: Vec<String> = tables.iter().map(|t| format!("\"{}\"", t.file_name())).collect();
    out.push_str(&format!("files = [{}]\n\n[config]\n", files.join(", ")));
    for line in config.echo() {
        // dotted keys are valid TOML keys once quoted
        let (k, v) = line.split_once(" = ").unwrap_or((&line, ""));
        out.push_str(&format!("\"{k}\" = {v}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_has_metadata_then_header() {
        let cfg = Config::parse("experiment = \"fig-cue\"\nseed = 3\n").unwrap();
        let mut t = Table::new("x", vec!["a", "b"]);
        t.push(vec![1usize.into(), 0.5.into()]);
        let text = String::from_utf8(t.to_csv(&cfg, 3).unwrap()).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "# experiment = fig-cue");
        assert_eq!(lines[1], "# seed = 3");
        assert!(lines.contains(&"a,b"));
        assert_eq!(*lines.last().unwrap(), "1,5.0000000000000000e-1");
    }

    #[test]
    fn manifest_is_valid_toml() {
        let cfg = Config::parse("experiment = \"fig-jc\"\nseed = 3\n[jc]\ng0 = 1.0\n").unwrap();
        let m = manifest(&cfg, 3, &[Table::new("fig-jc_n2", vec!["t"])]);
        let parsed: toml::Table = m.parse().unwrap();
        assert_eq!(parsed["seed"].as_integer(), Some(3));
        assert_eq!(parsed["config"]["jc.g0"].as_float(), Some(1.0));
    }
}
