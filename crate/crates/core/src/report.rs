//! Deterministic tabular output: CSV with fixed number formatting and
//! JSON arrays of records.

use std::path::{Path, PathBuf};

use serde_json::{Map, Number, Value};

use crate::config::OutputFormat;
use crate::error::{Error, Result};
use crate::reason::{Cell, Reason};

#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Text(String),
    Int(i64),
    Num(f64),
    Bool(bool),
    Blank,
}

impl Field {
    pub fn text(s: impl Into<String>) -> Self {
        Field::Text(s.into())
    }

    pub fn opt(x: Option<f64>) -> Self {
        x.map_or(Field::Blank, Field::Num)
    }

    pub fn cell(c: Cell) -> Self {
        Field::opt(c.ok())
    }

    /// Reason code of an absent cell, blank when present.
    pub fn reason(c: Cell) -> Self {
        match c {
            Ok(_) => Field::Blank,
            Err(r) => Field::reason_code(r),
        }
    }

    pub fn reason_code(r: Reason) -> Self {
        Field::Text(r.code().to_string())
    }

    pub fn opt_text(s: Option<&str>) -> Self {
        s.map_or(Field::Blank, Field::text)
    }
}

impl From<i32> for Field {
    fn from(v: i32) -> Self {
        Field::Int(v.into())
    }
}

impl From<usize> for Field {
    fn from(v: usize) -> Self {
        Field::Int(v as i64)
    }
}

impl From<f64> for Field {
    fn from(v: f64) -> Self {
        Field::Num(v)
    }
}

impl From<&str> for Field {
    fn from(v: &str) -> Self {
        Field::text(v)
    }
}

impl From<String> for Field {
    fn from(v: String) -> Self {
        Field::Text(v)
    }
}

impl From<bool> for Field {
    fn from(v: bool) -> Self {
        Field::Bool(v)
    }
}

/// Numbers with two decimals; `-0.00` is written as `0.00`.
pub fn format_fixed(x: f64) -> String {
    let s = format!("{x:.2}");
    if s == "-0.00" {
        "0.00".into()
    } else {
        s
    }
}

/// Shortest round-trip decimal form.
pub fn format_full(x: f64) -> String {
    if x == 0.0 {
        "0".into()
    } else {
        format!("{x}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Field>>,
    /// Summary tables are rounded to two decimals in CSV.
    pub summary: bool,
}

impl Table {
    pub fn new(name: &str, columns: &[&str], summary: bool) -> Self {
        Self { name: name.into(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new(), summary }
    }

    pub fn push(&mut self, row: Vec<Field>) {
        assert_eq!(row.len(), self.columns.len(), "row width mismatch in table {}", self.name);
        self.rows.push(row);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Rejects NaN and infinities anywhere in the table.
    pub fn validate(&self) -> Result<()> {
        for (i, row) in self.rows.iter().enumerate() {
            for (field, col) in row.iter().zip(&self.columns) {
                if let Field::Num(x) = field {
                    if !x.is_finite() {
                        return Err(Error::Invariant(format!("{}: non-finite {col} in row {}", self.name, i + 1)));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn to_csv(&self, raw_precision: bool) -> Result<String> {
        self.validate()?;
        let fixed = self.summary && !raw_precision;
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|f| match f {
                Field::Text(s) => s.clone(),
                Field::Int(v) => v.to_string(),
                Field::Num(x) if fixed => format_fixed(*x),
                Field::Num(x) => format_full(*x),
                Field::Bool(b) => b.to_string(),
                Field::Blank => String::new(),
            }))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn to_json_value(&self) -> Result<Value> {
        self.validate()?;
        let records = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(col, f)| {
                        let v = match f {
                            Field::Text(s) => Value::String(s.clone()),
                            Field::Int(v) => Value::Number((*v).into()),
                            Field::Num(x) => Value::Number(Number::from_f64(*x).expect("validated finite")),
                            Field::Bool(b) => Value::Bool(*b),
                            Field::Blank => Value::Null,
                        };
                        (col.clone(), v)
                    })
                    .collect();
                Value::Object(obj)
            })
            .collect();
        Ok(Value::Array(records))
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(&self.to_json_value()?)?;
        s.push('\n');
        Ok(s)
    }

    /// Writes `<name>.csv` and/or `<name>.json` into `dir`.
    pub fn write(&self, dir: &Path, format: OutputFormat, raw_precision: bool) -> Result<Vec<PathBuf>> {
        let mut written = Vec::new();
        if format.csv() {
            let path = dir.join(format!("{}.csv", self.name));
            std::fs::write(&path, self.to_csv(raw_precision)?)?;
            written.push(path);
        }
        if format.json() {
            let path = dir.join(format!("{}.json", self.name));
            std::fs::write(&path, self.to_json()?)?;
            written.push(path);
        }
        Ok(written)
    }
}

/// Writes every table, in order, creating `dir` first.
pub fn write_tables(tables: &[Table], dir: &Path, format: OutputFormat, raw_precision: bool) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    for t in tables {
        t.validate()?;
    }
    let mut out = Vec::new();
    for t in tables {
        out.extend(t.write(dir, format, raw_precision)?);
    }
    Ok(out)
}
