//! Long-format result tables and their CSV and JSON serializations.
//!
//! Floats are written with 17 significant digits in scientific notation, so
//! identical runs produce byte-identical files and every value round-trips.

use std::io::Write;

use serde::Serialize;
use serde_json::value::RawValue;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Bool(bool),
    Text(String),
    /// No value at this row (written as an empty CSV field or JSON null).
    Missing,
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

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v.into())
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
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

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Missing, Into::into)
    }
}

pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

impl Cell {
    fn csv_field(&self) -> String {
        match self {
            Cell::Float(v) => format_float(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Missing => String::new(),
        }
    }

    fn json(&self) -> serde_json::Result<Box<RawValue>> {
        let text = match self {
            Cell::Float(v) if v.is_finite() => format_float(*v),
            Cell::Float(_) | Cell::Missing => "null".to_owned(),
            Cell::Int(v) => v.to_string(),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(s) => serde_json::to_string(s)?,
        };
        RawValue::from_string(text)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub command: &'static str,
    /// Lines written as `# ...` above the CSV header (and as `notes` in JSON).
    pub notes: Vec<String>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(command: &'static str, columns: &[&'static str]) -> Self {
        Self { command, notes: Vec::new(), columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| *c == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Serialize)]
struct JsonDocument<'a> {
    command: &'a str,
    notes: &'a [String],
    columns: &'a [&'static str],
    rows: Vec<Vec<Box<RawValue>>>,
}

pub fn write_csv<W: Write>(table: &Table, mut out: W) -> std::io::Result<()> {
    for note in &table.notes {
        writeln!(out, "# {note}")?;
    }
    let mut writer = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    writer.write_record(&table.columns)?;
    for row in &table.rows {
        writer.write_record(row.iter().map(Cell::csv_field))?;
    }
    writer.flush()
}

pub fn write_json<W: Write>(table: &Table, mut out: W) -> std::io::Result<()> {
    let rows = table
        .rows
        .iter()
        .map(|row| row.iter().map(Cell::json).collect::<serde_json::Result<Vec<_>>>())
        .collect::<serde_json::Result<Vec<_>>>()?;
    let doc = JsonDocument {
        command: table.command,
        notes: &table.notes,
        columns: &table.columns,
        rows,
    };
    serde_json::to_writer_pretty(&mut out, &doc)?;
    writeln!(out)
}

pub fn write<W: Write>(table: &Table, format: Format, out: W) -> std::io::Result<()> {
    match format {
        Format::Csv => write_csv(table, out),
        Format::Json => write_json(table, out),
    }
}
