//! Artifact files and their headers.
//!
//! A run writes `<kind>.csv` (or `<kind>.json`) with the data rows and
//! `<kind>.report.json` with the summary and checks. Both start with the
//! same header: tool version, experiment, seed, the SHA-256 of the resolved
//! configuration and the configuration itself. Nothing time- or
//! host-dependent is written, so equal configurations give equal bytes.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::config::{Format, RunConfig};
use crate::error::{CliError, Result};

pub const TOOL: &str = env!("CARGO_PKG_NAME");
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// JSON number, or a string for the non-finite values JSON cannot hold.
pub fn num(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else if v.is_nan() {
        json!("nan")
    } else if v > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

pub fn opt_num(v: Option<f64>) -> Value {
    v.map_or(Value::Null, num)
}

/// Quotes `s` when it holds a comma, quote or newline.
pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
    Bool(bool),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format!("{v:?}"),
            Cell::Text(s) => csv_field(s),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => json!(v),
            Cell::Float(v) => num(*v),
            Cell::Text(s) => json!(s),
            Cell::Bool(b) => json!(b),
            Cell::Empty => Value::Null,
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Float)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(i64::from(v))
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_owned())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// A pass/fail line of a report. Only `enforced` checks decide the exit
/// status; the others are measurements reported for the reader.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    #[serde(serialize_with = "ser_num")]
    pub value: f64,
    #[serde(serialize_with = "ser_num")]
    pub limit: f64,
    pub passed: bool,
    pub enforced: bool,
}

fn ser_num<S: serde::Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    num(*v).serialize(s)
}

impl Check {
    /// Passes when `value ≤ limit`.
    pub fn at_most(name: impl Into<String>, value: f64, limit: f64, enforced: bool) -> Self {
        Self {
            name: name.into(),
            value,
            limit,
            passed: value <= limit,
            enforced,
        }
    }

    /// Boolean condition; `value` is 1 or 0 and `limit` 1.
    pub fn holds(name: impl Into<String>, ok: bool, enforced: bool) -> Self {
        Self {
            name: name.into(),
            value: if ok { 1.0 } else { 0.0 },
            limit: 1.0,
            passed: ok,
            enforced,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Artifacts {
    pub table: Table,
    pub summary: Value,
    pub checks: Vec<Check>,
}

impl Artifacts {
    /// `true` unless an enforced check failed.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed || !c.enforced)
    }

    pub fn failed_checks(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| c.enforced && !c.passed).collect()
    }
}

/// Resolved configuration plus the digests of input files it names.
#[derive(Debug, Clone, PartialEq)]
pub struct Header {
    pub experiment: &'static str,
    pub seed: u64,
    pub config: Value,
    pub hash: String,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let mut s = String::with_capacity(64);
    for b in digest {
        write!(s, "{b:02x}").expect("write to string");
    }
    s
}

impl Header {
    /// `inputs` maps input file names to their SHA-256; it is folded into
    /// the hashed configuration so a changed file changes the hash.
    pub fn new(config: &RunConfig, inputs: &[(String, String)]) -> Self {
        let mut value = config.canonical_json();
        if !inputs.is_empty() {
            let map: Map<String, Value> = inputs
                .iter()
                .map(|(k, v)| (k.clone(), json!(format!("sha256:{v}"))))
                .collect();
            value
                .as_object_mut()
                .expect("config is an object")
                .insert("inputs".into(), Value::Object(map));
        }
        let text = serde_json::to_string(&value).expect("json");
        Self {
            experiment: config.experiment.kind(),
            seed: config.seed,
            hash: format!("sha256:{}", sha256_hex(text.as_bytes())),
            config: value,
        }
    }

    fn json(&self) -> Value {
        json!({
            "tool": TOOL,
            "version": VERSION,
            "experiment": self.experiment,
            "seed": self.seed,
            "config_hash": self.hash,
            "config": self.config,
        })
    }

    fn csv_lines(&self) -> String {
        format!(
            "# tool: {TOOL} {VERSION}\n# experiment: {}\n# seed: {}\n# config-hash: {}\n# config: {}\n",
            self.experiment,
            self.seed,
            self.hash,
            serde_json::to_string(&self.config).expect("json")
        )
    }
}

pub fn render_csv(header: &Header, table: &Table) -> String {
    let mut out = header.csv_lines();
    out.push_str(&table.columns.join(","));
    out.push('\n');
    for row in &table.rows {
        let cells: Vec<String> = row.iter().map(Cell::csv).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn render_json(header: &Header, table: &Table) -> String {
    let rows: Vec<Value> = table
        .rows
        .iter()
        .map(|r| {
            Value::Object(
                table
                    .columns
                    .iter()
                    .zip(r)
                    .map(|(c, v)| ((*c).to_owned(), v.json()))
                    .collect(),
            )
        })
        .collect();
    let mut s =
        serde_json::to_string_pretty(&json!({ "header": header.json(), "rows": rows })).expect("json");
    s.push('\n');
    s
}

pub fn render_report(header: &Header, artifacts: &Artifacts) -> String {
    let mut s = serde_json::to_string_pretty(&json!({
        "header": header.json(),
        "passed": artifacts.passed(),
        "checks": artifacts.checks,
        "summary": artifacts.summary,
    }))
    .expect("json");
    s.push('\n');
    s
}

/// Writes both files into `dir`, creating it if needed, and returns their
/// paths (data first).
pub fn write(dir: &Path, format: Format, header: &Header, artifacts: &Artifacts) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let data = dir.join(format!("{}.{}", header.experiment, format.extension()));
    let body = match format {
        Format::Csv => render_csv(header, &artifacts.table),
        Format::Json => render_json(header, &artifacts.table),
    };
    std::fs::write(&data, body).map_err(|e| CliError::io(&data, e))?;
    let report = dir.join(format!("{}.report.json", header.experiment));
    std::fs::write(&report, render_report(header, artifacts)).map_err(|e| CliError::io(&report, e))?;
    Ok(vec![data, report])
}
