use std::io::Write;

use serde::Serialize;
use serde_json::{json, Value};

use crate::args::Format;

/// Version of every JSON and CSV layout this binary emits.
pub const SCHEMA: u32 = 1;

pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: Vec<&'static str>) -> Self {
        Self { header, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

pub enum Body {
    /// One document.
    Object(Value),
    /// One JSON document per line.
    Lines(Vec<Value>),
}

pub struct Report {
    pub command: &'static str,
    pub body: Body,
    pub table: Table,
}

impl Report {
    pub fn object(command: &'static str, result: &impl Serialize, table: Table) -> Self {
        let value = serde_json::to_value(result).expect("results serialize to JSON");
        Self { command, body: Body::Object(value), table }
    }

    pub fn write(&self, format: Format, out: &mut impl Write) -> std::io::Result<()> {
        match format {
            Format::Json => match &self.body {
                Body::Object(result) => {
                    let doc = json!({ "schema": SCHEMA, "command": self.command, "result": result });
                    serde_json::to_writer_pretty(&mut *out, &doc)?;
                    writeln!(out)
                }
                Body::Lines(records) => {
                    for record in records {
                        let mut line = json!({ "schema": SCHEMA });
                        if let (Value::Object(line), Value::Object(fields)) = (&mut line, record) {
                            line.extend(fields.clone());
                        }
                        serde_json::to_writer(&mut *out, &line)?;
                        writeln!(out)?;
                    }
                    Ok(())
                }
            },
            Format::Csv => {
                let mut writer = csv::Writer::from_writer(out);
                writer.write_record(&self.table.header)?;
                for row in &self.table.rows {
                    writer.write_record(row)?;
                }
                writer.flush()
            }
        }
    }
}

pub fn num(x: f64) -> String {
    x.to_string()
}

pub fn opt<T: ToString>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}
