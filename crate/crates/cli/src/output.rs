//! Run documents and their CSV / JSON serializations.

use std::io::Write;

use serde_json::{Map, Number, Value};

/// Bumped whenever columns or record keys change meaning.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
    Bool(bool),
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

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

/// Rounds to 12 significant digits.
pub fn round12(v: f64) -> f64 {
    if !v.is_finite() {
        return v;
    }
    format!("{v:.11e}").parse().expect("formatted float parses")
}

/// Shortest text that round-trips the 12-digit rounding of `v`.
pub fn format_float(v: f64) -> String {
    if v.is_nan() {
        return "NaN".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let r = round12(v);
    if r == 0.0 {
        return "0".into();
    }
    if (1e-5..1e15).contains(&r.abs()) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

impl Cell {
    fn text(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Float(f) => format_float(*f),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(i) => Value::from(*i),
            Cell::Float(f) => Number::from_f64(round12(*f)).map_or(Value::Null, Value::Number),
            Cell::Text(s) => Value::from(s.as_str()),
            Cell::Bool(b) => Value::from(*b),
        }
    }
}

pub type Fields = Vec<(&'static str, Cell)>;

/// Everything one subcommand emits.
#[derive(Debug, Clone, Default)]
pub struct Document {
    pub command: &'static str,
    pub config: Fields,
    pub summary: Fields,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    /// JSON-only additions to `results`.
    pub extra: Vec<(&'static str, Value)>,
}

fn object(fields: &Fields) -> Value {
    Value::Object(
        fields
            .iter()
            .map(|(k, v)| (k.to_string(), v.json()))
            .collect(),
    )
}

impl Document {
    pub fn new(command: &'static str) -> Self {
        Document {
            command,
            ..Document::default()
        }
    }

    /// `#` metadata lines, a header row, then data rows; LF endings.
    pub fn write_csv(&self, out: &mut dyn Write) -> std::io::Result<()> {
        writeln!(out, "# bqst {}", self.command)?;
        writeln!(out, "# schema_version={SCHEMA_VERSION}")?;
        for (k, v) in &self.config {
            writeln!(out, "# config.{k}={}", v.text())?;
        }
        for (k, v) in &self.summary {
            writeln!(out, "# result.{k}={}", v.text())?;
        }
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::text))?;
        }
        w.flush()
    }

    /// `{config, schema_version, results}`, pretty-printed.
    pub fn write_json(&self, out: &mut dyn Write) -> std::io::Result<()> {
        let mut config = Map::new();
        config.insert("command".into(), Value::from(self.command));
        if let Value::Object(m) = object(&self.config) {
            config.extend(m);
        }
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                Value::Object(
                    self.columns
                        .iter()
                        .zip(r)
                        .map(|(k, v)| (k.to_string(), v.json()))
                        .collect(),
                )
            })
            .collect();
        let mut results = Map::new();
        results.insert("summary".into(), object(&self.summary));
        results.insert("columns".into(), Value::from(self.columns.clone()));
        results.insert("rows".into(), Value::Array(rows));
        for (k, v) in &self.extra {
            results.insert(k.to_string(), v.clone());
        }
        let mut doc = Map::new();
        doc.insert("config".into(), Value::Object(config));
        doc.insert("schema_version".into(), Value::from(SCHEMA_VERSION));
        doc.insert("results".into(), Value::Object(results));
        serde_json::to_writer_pretty(&mut *out, &Value::Object(doc))?;
        writeln!(out)
    }
}
