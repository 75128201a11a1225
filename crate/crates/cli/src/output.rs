//! CSV and JSON emission.

use std::io::Write;
use std::path::Path;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Name(&'static str),
    Int(i64),
    Float(f64),
}

/// Floats carry 17 significant digits.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

impl Cell {
    fn text(self) -> String {
        match self {
            Cell::Name(s) => s.to_string(),
            Cell::Int(i) => i.to_string(),
            Cell::Float(x) => format_float(x),
        }
    }

    fn json(self) -> Value {
        match self {
            Cell::Name(s) => Value::from(s),
            Cell::Int(i) => Value::from(i),
            Cell::Float(x) => Value::from(x),
        }
    }
}

/// A header row plus records of equal width.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub headers: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(headers: Vec<&'static str>) -> Self {
        Self {
            headers,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<Vec<u8>, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let fail = |e: csv::Error| CliError::Config(format!("csv: {e}"));
        w.write_record(&self.headers).map_err(fail)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|c| c.text())).map_err(fail)?;
        }
        w.into_inner()
            .map_err(|e| CliError::Config(format!("csv: {e}")))
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Value> = self
                        .headers
                        .iter()
                        .zip(row)
                        .map(|(h, c)| (h.to_string(), c.json()))
                        .collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }

    pub fn render(&self, format: Format) -> Result<Vec<u8>, CliError> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => json_bytes(&self.to_json()),
        }
    }
}

pub fn json_bytes<T: Serialize + ?Sized>(value: &T) -> Result<Vec<u8>, CliError> {
    let mut bytes =
        serde_json::to_vec_pretty(value).map_err(|e| CliError::Config(format!("json: {e}")))?;
    bytes.push(b'\n');
    Ok(bytes)
}

/// Writes to `path`, or to stdout when absent.
pub fn write_output(bytes: &[u8], path: Option<&Path>) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, bytes).map_err(|e| CliError::io(p.display(), e)),
        None => std::io::stdout()
            .write_all(bytes)
            .map_err(|e| CliError::io("stdout", e)),
    }
}

/// Parses a CSV with a header row and returns the named float column.
pub fn read_column(text: &str, name: &str) -> Result<Vec<f64>, CliError> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let headers = r
        .headers()
        .map_err(|e| CliError::Config(format!("malformed csv: {e}")))?;
    let idx = headers
        .iter()
        .position(|h| h.trim() == name)
        .ok_or_else(|| CliError::Config(format!("input csv has no column '{name}'")))?;
    let mut out = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| CliError::Config(format!("malformed csv: {e}")))?;
        let field = rec.get(idx).unwrap_or("");
        let v: f64 = field.trim().parse().map_err(|_| {
            CliError::Config(format!("row {}: '{field}' is not a number", line + 1))
        })?;
        if !v.is_finite() {
            return Err(CliError::Config(format!(
                "row {}: non-finite value",
                line + 1
            )));
        }
        out.push(v);
    }
    Ok(out)
}
