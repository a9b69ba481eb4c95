// Copyright 2026 The mzi-thermo Authors
// SPDX-License-Identifier: Apache-2.0

//! Run artifacts: CSV tables with `#` metadata, one JSON document, SVG plots.

use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};

use crate::error::{CliError, Result};

pub const TOOLKIT: &str = "mzi-thermo";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Real(f64),
    Int(i64),
    Text(String),
    Missing,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Real(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Missing, Cell::Real)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_owned())
    }
}

impl Cell {
    /// CSV text; reals keep 15 significant digits.
    pub fn csv(&self) -> String {
        match self {
            Cell::Real(v) if v.is_finite() => format!("{v:.14e}"),
            Cell::Real(v) if v.is_nan() => "nan".into(),
            Cell::Real(v) => if *v > 0.0 { "inf" } else { "-inf" }.into(),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Missing => String::new(),
        }
    }

    pub fn json(&self) -> Value {
        match self {
            Cell::Real(v) => serde_json::Number::from_f64(*v).map_or(Value::Null, Value::Number),
            Cell::Int(v) => json!(v),
            Cell::Text(s) => json!(s),
            Cell::Missing => Value::Null,
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Real(v) => Some(*v),
            Cell::Int(v) => Some(*v as f64),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    /// File suffix and JSON tag; empty for the main table.
    pub name: String,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&'static str]) -> Self {
        Self {
            name: name.to_owned(),
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let j = self.columns.iter().position(|c| *c == name)?;
        Some(self.rows.iter().map(|r| r[j].as_f64()).collect())
    }

    fn tag(&self) -> &str {
        if self.name.is_empty() {
            "main"
        } else {
            &self.name
        }
    }
}

/// Everything a command produced, before it touches the filesystem.
#[derive(Clone, Debug)]
pub struct Report {
    pub command: &'static str,
    /// Fully resolved parameters.
    pub spec: Value,
    pub seeds: Vec<Value>,
    pub tables: Vec<Table>,
    /// Extra JSON results placed ahead of the table rows.
    pub summary: Vec<Value>,
    /// `(file suffix, SVG document)`.
    pub plots: Vec<(String, String)>,
    /// Set when a tolerance check failed; the artifacts are still written.
    pub failure: Option<String>,
}

impl Report {
    pub fn new(command: &'static str, spec: Value) -> Self {
        Self {
            command,
            spec,
            seeds: Vec::new(),
            tables: Vec::new(),
            summary: Vec::new(),
            plots: Vec::new(),
            failure: None,
        }
    }

    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    fn spec_with_command(&self) -> Value {
        let mut m = Map::new();
        m.insert("command".into(), json!(self.command));
        if let Value::Object(o) = &self.spec {
            m.extend(o.clone());
        }
        Value::Object(m)
    }

    /// One-line header shared by the CSV comments and SVG metadata.
    pub fn header_lines(&self) -> Vec<String> {
        vec![
            format!("{TOOLKIT} {VERSION}"),
            format!("command: {}", self.command),
            format!("spec: {}", self.spec_with_command()),
        ]
    }

    pub fn to_json(&self) -> String {
        let mut results = self.summary.clone();
        for t in &self.tables {
            for row in &t.rows {
                let mut o = Map::new();
                o.insert("table".into(), json!(t.tag()));
                for (c, v) in t.columns.iter().zip(row) {
                    o.insert((*c).into(), v.json());
                }
                results.push(Value::Object(o));
            }
        }
        let doc = json!({
            "spec": self.spec_with_command(),
            "seeds": self.seeds,
            "results": results,
            "provenance": { "toolkit": TOOLKIT, "version": VERSION, "timestamp": timestamp() },
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("JSON values always serialize");
        s.push('\n');
        s
    }

    pub fn to_csv(&self, table: &Table) -> String {
        let mut out = String::new();
        for line in self.header_lines() {
            out.push_str("# ");
            out.push_str(&line);
            out.push('\n');
        }
        if !table.name.is_empty() {
            out.push_str(&format!("# table: {}\n", table.name));
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&table.columns).expect("in-memory write");
        for row in &table.rows {
            w.write_record(row.iter().map(Cell::csv)).expect("in-memory write");
        }
        out.push_str(&String::from_utf8(w.into_inner().expect("in-memory flush")).expect("CSV is UTF-8"));
        out
    }

    /// Writes `<name>[_table].csv`, `<name>.json` and `<name>[_suffix].svg`.
    pub fn write(&self, dir: &Path, name: &str, svg: bool) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
        let mut written = Vec::new();
        let mut put = |file: String, body: &str| -> Result<()> {
            let path = dir.join(file);
            std::fs::write(&path, body).map_err(|e| io(&path, e))?;
            written.push(path);
            Ok(())
        };
        for t in &self.tables {
            let file = if t.name.is_empty() {
                format!("{name}.csv")
            } else {
                format!("{name}_{}.csv", t.name)
            };
            put(file, &self.to_csv(t))?;
        }
        put(format!("{name}.json"), &self.to_json())?;
        if svg {
            for (suffix, doc) in &self.plots {
                put(
                    format!("{name}{suffix}.svg"),
                    &crate::svg::with_metadata(doc, &self.header_lines()),
                )?;
            }
        }
        Ok(written)
    }
}

fn io(path: &Path, source: std::io::Error) -> CliError {
    CliError::Io {
        path: path.to_owned(),
        source,
    }
}

/// RFC 3339 time from `SOURCE_DATE_EPOCH`, or `null` so reruns stay
/// byte-identical.
pub fn timestamp() -> Value {
    let Some(secs) = std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|s| s.trim().parse::<i64>().ok())
    else {
        return Value::Null;
    };
    time::OffsetDateTime::from_unix_timestamp(secs)
        .ok()
        .and_then(|t| t.format(&time::format_description::well_known::Rfc3339).ok())
        .map_or(Value::Null, Value::String)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut r = Report::new("qfi-curve", json!({"T": [0.5]}));
        let mut t = Table::new("", &["T", "M", "Q"]);
        t.push(vec![0.5.into(), 3usize.into(), Cell::Real(1.0 / 3.0)]);
        t.push(vec![0.5.into(), 4usize.into(), Cell::Missing]);
        r.tables.push(t);
        r
    }

    #[test]
    fn csv_has_metadata_and_precision() {
        let csv = sample().to_csv(&sample().tables[0]);
        let lines: Vec<&str> = csv.lines().collect();
        assert!(lines[0].starts_with("# mzi-thermo "));
        assert!(lines[2].contains("\"command\":\"qfi-curve\""));
        assert_eq!(lines[3], "T,M,Q");
        assert_eq!(lines[4], "5.00000000000000e-1,3,3.33333333333333e-1");
        assert_eq!(lines[5], "5.00000000000000e-1,4,");
        let back: f64 = lines[4].split(',').nth(2).unwrap().parse().unwrap();
        assert!((back - 1.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn json_document_shape() {
        let v: Value = serde_json::from_str(&sample().to_json()).unwrap();
        assert_eq!(v["spec"]["command"], "qfi-curve");
        assert_eq!(v["results"][0]["table"], "main");
        assert_eq!(v["results"][1]["Q"], Value::Null);
        assert_eq!(v["provenance"]["version"], VERSION);
        assert!(v["seeds"].is_array());
    }
}
