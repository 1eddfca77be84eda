use std::io::Write;

use serde_json::{json, Map, Value};

use crate::args::{Common, Format};
use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    /// Written as an empty CSV field and JSON `null`.
    Empty,
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        // fold -0 into 0 so equal values print identically
        Cell::Num(if x == 0.0 { 0.0 } else { x })
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Empty, Cell::from)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => format!("{x}"),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(x) if x.is_finite() => json!(x),
            Cell::Num(x) => json!(format!("{x}")),
            Cell::Int(i) => json!(i),
            Cell::Text(s) => json!(s),
            Cell::Empty => Value::Null,
        }
    }
}

pub struct Table {
    pub command: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    /// Extra JSON-only fields.
    pub meta: Map<String, Value>,
}

impl Table {
    pub fn new(command: &'static str, columns: &[&'static str]) -> Self {
        Self { command, columns: columns.to_vec(), rows: Vec::new(), meta: Map::new() }
    }

    pub fn to_csv(&self) -> Result<Vec<u8>, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let fail = |e: csv::Error| CliError::Usage(format!("csv: {e}"));
        w.write_record(&self.columns).map_err(fail)?;
        for r in &self.rows {
            w.write_record(r.iter().map(Cell::csv)).map_err(fail)?;
        }
        w.into_inner().map_err(|e| CliError::Usage(format!("csv: {e}")))
    }

    pub fn to_json(&self) -> String {
        let mut obj = Map::new();
        obj.insert("schema_version".into(), json!(SCHEMA_VERSION));
        obj.insert("command".into(), json!(self.command));
        obj.insert("columns".into(), json!(self.columns));
        obj.insert("rows".into(), Value::Array(self.rows.iter().map(|r| Value::Array(r.iter().map(Cell::json).collect())).collect()));
        for (k, v) in &self.meta {
            obj.insert(k.clone(), v.clone());
        }
        let mut s = serde_json::to_string_pretty(&Value::Object(obj)).unwrap_or_default();
        s.push('\n');
        s
    }

    pub fn emit(&self, common: &Common) -> Result<(), CliError> {
        let bytes = match common.format {
            Format::Csv => self.to_csv()?,
            Format::Json => self.to_json().into_bytes(),
        };
        write_out(common, &bytes)
    }
}

pub fn write_out(common: &Common, bytes: &[u8]) -> Result<(), CliError> {
    match &common.out {
        Some(p) => std::fs::write(p, bytes)?,
        None => std::io::stdout().lock().write_all(bytes)?,
    }
    Ok(())
}
