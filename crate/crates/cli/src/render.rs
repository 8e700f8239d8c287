//! Serialisation of command results as JSON, CSV or plain text.

use serde::Serialize;
use serde_json::{Map, Value};

use crate::args::OutputFormat;

/// Rows for CSV and plain output when the natural result is tabular.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

/// The document printed by every subcommand.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub op: &'static str,
    pub inputs: Value,
    pub outputs: Map<String, Value>,
    pub paper_ref: &'static str,
    pub config: Value,
    #[serde(skip)]
    pub table: Option<Table>,
    /// Preformatted lines that replace the key/value listing in plain output.
    #[serde(skip)]
    pub plain_lines: Option<Vec<String>>,
}

fn flatten(prefix: &str, value: &Value, out: &mut Vec<(String, Value)>) {
    match value {
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), v, out);
            }
        }
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, v, out);
            }
        }
        other => out.push((prefix.to_string(), other.clone())),
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn csv_text(columns: &[String], rows: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(columns).expect("in-memory write");
    for row in rows {
        w.write_record(row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

fn plain_value(v: &Value) -> String {
    match v {
        Value::Array(items) if items.iter().all(Value::is_array) => items
            .iter()
            .map(|row| format!("\n    {}", plain_value(row)))
            .collect(),
        Value::Array(items) => items.iter().map(plain_value).collect::<Vec<_>>().join(" "),
        other => cell(other),
    }
}

impl Report {
    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => {
                let mut text = serde_json::to_string_pretty(self).expect("report serialises");
                text.push('\n');
                text
            }
            OutputFormat::Csv => match &self.table {
                Some(t) => {
                    let rows: Vec<Vec<String>> = t.rows.iter().map(|r| r.iter().map(cell).collect()).collect();
                    csv_text(&t.columns, &rows)
                }
                None => {
                    let mut flat = Vec::new();
                    flatten("", &Value::Object(self.outputs.clone()), &mut flat);
                    let (cols, vals): (Vec<String>, Vec<String>) = flat.iter().map(|(k, v)| (k.clone(), cell(v))).unzip();
                    csv_text(&cols, &[vals])
                }
            },
            OutputFormat::Plain => {
                let mut text = String::new();
                match &self.plain_lines {
                    Some(lines) => {
                        for line in lines {
                            text.push_str(line);
                            text.push('\n');
                        }
                    }
                    None => {
                        for (k, v) in &self.outputs {
                            if self.table.is_some() && v.is_array() && v.as_array().is_some_and(|a| a.iter().all(Value::is_object)) {
                                continue;
                            }
                            text.push_str(&format!("{k}: {}\n", plain_value(v)));
                        }
                        if let Some(t) = &self.table {
                            text.push_str(&t.columns.join("\t"));
                            text.push('\n');
                            for row in &t.rows {
                                text.push_str(&row.iter().map(cell).collect::<Vec<_>>().join("\t"));
                                text.push('\n');
                            }
                        }
                    }
                }
                text
            }
        }
    }
}
