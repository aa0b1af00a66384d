//! Output formats and the generic value table used by `compare`, `sweep`
//! and `oracle`.

use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use sedosc::table::{format_sig12, SCHEMA_VERSION};

use crate::error::{CliError, Result};
use crate::settings::Settings;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    Text,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "text" | "txt" => Ok(Format::Text),
            other => Err(format!("unknown format `{other}` (expected csv, json or text)")),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
            Format::Text => "text",
        })
    }
}

/// One table entry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Bool(bool),
    Num(f64),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Bool(b) => b.to_string(),
            Cell::Num(v) => format_sig12(*v),
        }
    }

    fn parse(s: &str) -> Result<Self> {
        match s {
            "true" => Ok(Cell::Bool(true)),
            "false" => Ok(Cell::Bool(false)),
            _ => s.parse().map(Cell::Num).map_err(|_| CliError::usage(format!("`{s}` is not a table value"))),
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Num(v) => Some(*v),
            Cell::Bool(_) => None,
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

/// Rows of numbers under named columns.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ValueTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

#[derive(Serialize, Deserialize)]
struct ValueDocument {
    schema_version: u32,
    kind: String,
    #[serde(default)]
    metadata: Vec<(String, String)>,
    columns: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

impl ValueTable {
    pub fn new(columns: &[&str]) -> Self {
        Self { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<Cell>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let fail = |e: csv::Error| CliError::usage(e.to_string());
        w.write_record(&self.columns).map_err(fail)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render)).map_err(fail)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::usage(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("CSV output is UTF-8"))
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let fail = |e: csv::Error| CliError::usage(e.to_string());
        let mut r = csv::Reader::from_reader(text.as_bytes());
        let columns = r.headers().map_err(fail)?.iter().map(String::from).collect();
        let mut rows = Vec::new();
        for rec in r.records() {
            rows.push(rec.map_err(fail)?.iter().map(Cell::parse).collect::<Result<_>>()?);
        }
        Ok(Self { columns, rows })
    }

    pub fn to_json(&self, kind: &str, metadata: &[(String, String)]) -> Result<String> {
        let doc = ValueDocument {
            schema_version: SCHEMA_VERSION,
            kind: kind.into(),
            metadata: metadata.to_vec(),
            columns: self.columns.clone(),
            rows: self.rows.clone(),
        };
        serde_json::to_string_pretty(&doc).map_err(|e| CliError::usage(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ValueDocument = serde_json::from_str(text).map_err(|e| CliError::usage(e.to_string()))?;
        if doc.schema_version != SCHEMA_VERSION {
            return Err(CliError::usage(format!("unsupported schema version {}", doc.schema_version)));
        }
        Ok(Self { columns: doc.columns, rows: doc.rows })
    }

    pub fn to_text(&self) -> String {
        let mut cells = vec![self.columns.clone()];
        cells.extend(self.rows.iter().map(|r| r.iter().map(Cell::render).collect()));
        let mut widths = vec![0; self.columns.len()];
        for row in &cells {
            for (w, c) in widths.iter_mut().zip(row) {
                *w = (*w).max(c.chars().count());
            }
        }
        let mut out = String::new();
        for row in &cells {
            let line: Vec<String> = row.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect();
            out.push_str(&line.join("  "));
            out.push('\n');
        }
        out
    }

    pub fn render(&self, format: Format, kind: &str, metadata: &[(String, String)]) -> Result<String> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(kind, metadata).map(|s| s + "\n"),
            Format::Text => Ok(self.to_text()),
        }
    }
}

/// Output format from the `format` key.
pub fn format(settings: &Settings, default: Format) -> Result<Format> {
    settings.get_or("format", default)
}

/// Writes `content` to the `output` path if set, otherwise to `stdout`.
pub fn emit(settings: &Settings, content: &str, stdout: &mut dyn Write) -> Result<()> {
    match settings.raw("output") {
        Some(path) => write_file(Path::new(path), content.as_bytes()),
        None => Ok(stdout.write_all(content.as_bytes())?),
    }
}

pub fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}
