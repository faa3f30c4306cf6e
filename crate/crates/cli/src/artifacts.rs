use crate::config::Kind;
use crate::error::CliError;
use serde::Serialize;
use serde_json::{json, Map, Value};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

pub const SCHEMA_VERSION: u32 = 1;

/// One CSV cell.
pub enum Cell {
    Int(u64),
    Float(f64),
    Text(String),
    Bool(bool),
}

impl From<u64> for Cell {
    fn from(x: u64) -> Self {
        Cell::Int(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as u64)
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.to_string())
    }
}

impl From<String> for Cell {
    fn from(x: String) -> Self {
        Cell::Text(x)
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Bool(x)
    }
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Int(x) => x.to_string(),
            Cell::Float(x) => float(*x),
            Cell::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }
}

/// Shortest round-trip decimal, in scientific notation outside `[1e-4, 1e16)`.
pub fn float(x: f64) -> String {
    let m = x.abs();
    if x == 0.0 || !x.is_finite() || (1e-4..1e16).contains(&m) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

#[macro_export]
macro_rules! row {
    ($($x:expr),* $(,)?) => { vec![$($crate::artifacts::Cell::from($x)),*] };
}

pub struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Self {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn render(&self, kind: Kind, seed: u64) -> String {
        let mut out = format!("# schema={kind} version={SCHEMA_VERSION} seed={seed}\n");
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::render).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }
}

/// A named pass/fail check with the measured value and its tolerance.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub suite: String,
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    pub fn new(suite: &str, name: impl Into<String>, value: f64, tolerance: f64, pass: bool) -> Self {
        Self {
            suite: suite.to_string(),
            name: name.into(),
            value,
            tolerance,
            pass,
        }
    }

    /// `value ≤ tolerance`.
    pub fn at_most(suite: &str, name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self::new(suite, name, value, tolerance, value <= tolerance)
    }
}

/// Everything an experiment produces.
pub struct Outcome {
    pub table: Table,
    pub results: Map<String, Value>,
    pub checks: Vec<Check>,
    pub summary: String,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Writes `<kind>.csv` and `<kind>.json` into `dir`.
pub fn emit(
    dir: &Path,
    kind: Kind,
    seed: u64,
    graph: Value,
    params: Value,
    outcome: &Outcome,
) -> Result<(PathBuf, PathBuf), CliError> {
    std::fs::create_dir_all(dir).map_err(|source| CliError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let csv = dir.join(format!("{kind}.csv"));
    let report = dir.join(format!("{kind}.json"));
    write(&csv, &outcome.table.render(kind, seed))?;
    let doc = json!({
        "schema": kind.to_string(),
        "version": SCHEMA_VERSION,
        "seed": seed,
        "graph": graph,
        "params": params,
        "results": Value::Object(outcome.results.clone()),
        "checks": outcome.checks,
        "passed": outcome.passed(),
        "summary": outcome.summary,
    });
    let mut text = serde_json::to_string_pretty(&doc).expect("report serializes");
    text.push('\n');
    write(&report, &text)?;
    Ok((csv, report))
}
