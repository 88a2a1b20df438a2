//! Output tables with fixed formatting: every float is written with 12
//! significant digits, so identical tables give identical bytes.

use std::io::Write;

use serde_json::{Map, Number, Value};

use crate::config::Format;
use crate::CliResult;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(u64),
}

impl Cell {
    pub fn as_f64(&self) -> f64 {
        match *self {
            Cell::Float(v) => v,
            Cell::Int(k) => k as f64,
        }
    }

    /// Scientific notation, 12 significant digits, no negative zero.
    pub fn text(&self) -> String {
        match *self {
            Cell::Int(k) => k.to_string(),
            Cell::Float(v) => {
                let s = format!("{v:.11e}");
                if v.is_finite() && s.parse::<f64>() == Ok(0.0) {
                    format!("{:.11e}", 0.0)
                } else {
                    s
                }
            }
        }
    }

    fn json(&self) -> Value {
        match *self {
            Cell::Int(k) => Value::from(k),
            Cell::Float(_) => {
                let rounded: f64 = self.text().parse().expect("formatted float parses");
                Number::from_f64(rounded).map(Value::Number).unwrap_or(Value::Null)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str], rows: Vec<Vec<Cell>>) -> Table {
        debug_assert!(rows.iter().all(|r| r.len() == columns.len()));
        Table { columns: columns.iter().map(|c| c.to_string()).collect(), rows }
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i].as_f64()).collect())
    }

    pub fn write<W: Write>(&self, out: &mut W, format: Format) -> CliResult<()> {
        match format {
            Format::Csv => self.write_csv(out),
            Format::Json => self.write_json(out),
        }
    }

    fn write_csv<W: Write>(&self, out: &mut W) -> CliResult<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        let io = |e: csv::Error| std::io::Error::other(e);
        w.write_record(&self.columns).map_err(io)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::text)).map_err(io)?;
        }
        w.flush()?;
        Ok(())
    }

    /// An array of records keyed by column name, in column order.
    fn write_json<W: Write>(&self, out: &mut W) -> CliResult<()> {
        let records: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut m = Map::new();
                for (name, cell) in self.columns.iter().zip(row) {
                    m.insert(name.clone(), cell.json());
                }
                Value::Object(m)
            })
            .collect();
        serde_json::to_writer_pretty(&mut *out, &Value::Array(records)).map_err(std::io::Error::other)?;
        out.write_all(b"\n")?;
        Ok(())
    }
}
