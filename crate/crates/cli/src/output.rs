//! Record emitters: aligned table, JSON lines, CSV.

use std::io::{self, Write};

use clap::ValueEnum;
use serde_json::{Map, Value};

pub const SCHEMA_PREFIX: &str = "cusp-census/v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    JsonLines,
    Csv,
}

/// A field value. Counts and other exact quantities travel as `Text`
/// holding a decimal string, never as JSON numbers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Field {
    Int(u64),
    Text(String),
    Empty,
}

impl Field {
    fn render(&self) -> String {
        match self {
            Field::Int(v) => v.to_string(),
            Field::Text(s) => s.clone(),
            Field::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Field::Int(v) => Value::from(*v),
            Field::Text(s) => Value::from(s.as_str()),
            Field::Empty => Value::Null,
        }
    }
}

impl From<usize> for Field {
    fn from(v: usize) -> Self {
        Field::Int(v as u64)
    }
}

impl From<String> for Field {
    fn from(v: String) -> Self {
        Field::Text(v)
    }
}

impl From<&str> for Field {
    fn from(v: &str) -> Self {
        Field::Text(v.to_string())
    }
}

impl<T: Into<Field>> From<Option<T>> for Field {
    fn from(v: Option<T>) -> Self {
        v.map_or(Field::Empty, Into::into)
    }
}

/// One output row; every record of a stream carries the same keys in the
/// same order.
#[derive(Debug, Clone, Default)]
pub struct Record {
    fields: Vec<(&'static str, Field)>,
}

impl Record {
    pub fn new() -> Self {
        Record::default()
    }

    pub fn with(mut self, key: &'static str, value: impl Into<Field>) -> Self {
        self.fields.push((key, value.into()));
        self
    }

    fn keys(&self) -> Vec<&'static str> {
        self.fields.iter().map(|(k, _)| *k).collect()
    }
}

pub fn write_records(out: &mut dyn Write, format: Format, kind: &str, records: &[Record]) -> io::Result<()> {
    let Some(first) = records.first() else { return Ok(()) };
    let keys = first.keys();
    debug_assert!(records.iter().all(|r| r.keys() == keys));
    match format {
        Format::JsonLines => {
            for r in records {
                let mut map = Map::new();
                map.insert("schema".into(), Value::from(format!("{SCHEMA_PREFIX}/{kind}")));
                for (k, v) in &r.fields {
                    map.insert((*k).into(), v.json());
                }
                serde_json::to_writer(&mut *out, &map)?;
                out.write_all(b"\n")?;
            }
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(&keys)?;
            for r in records {
                w.write_record(r.fields.iter().map(|(_, v)| v.render()))?;
            }
            w.flush()?;
        }
        Format::Table => {
            let rows: Vec<Vec<String>> = records.iter().map(|r| r.fields.iter().map(|(_, v)| v.render()).collect()).collect();
            let mut widths: Vec<usize> = keys.iter().map(|k| k.len()).collect();
            for row in &rows {
                for (w, cell) in widths.iter_mut().zip(row) {
                    *w = (*w).max(cell.chars().count());
                }
            }
            let line = |cells: Vec<String>| {
                let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
                padded.join("  ").trim_end().to_string()
            };
            writeln!(out, "{}", line(keys.iter().map(|k| k.to_string()).collect()))?;
            for row in rows {
                writeln!(out, "{}", line(row))?;
            }
        }
    }
    Ok(())
}
