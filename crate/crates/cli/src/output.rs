use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{Map, Number, Value};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Num(f64),
    Bool(bool),
    Text(String),
}

impl Field {
    fn csv(&self) -> String {
        match self {
            Field::Num(x) => format_number(*x),
            Field::Bool(b) => b.to_string(),
            Field::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Field::Num(x) => Number::from_f64(*x).map_or(Value::Null, Value::Number),
            Field::Bool(b) => Value::Bool(*b),
            Field::Text(s) => Value::String(s.clone()),
        }
    }
}

impl From<f64> for Field {
    fn from(x: f64) -> Self {
        Field::Num(x)
    }
}

impl From<bool> for Field {
    fn from(b: bool) -> Self {
        Field::Bool(b)
    }
}

/// Shortest decimal string that parses back to the same `f64`.
pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x}")
    }
}

/// Column names plus rows of fields, rendered identically to CSV and JSON.
#[derive(Debug, Clone, Default)]
pub struct Records {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Field>>,
}

impl Records {
    pub fn new(header: Vec<&'static str>) -> Self {
        Self {
            header,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Field>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<Vec<u8>, CliError> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        let fail = |e: csv::Error| CliError::domain(format!("csv: {e}"));
        w.write_record(&self.header).map_err(fail)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Field::csv)).map_err(fail)?;
        }
        w.into_inner().map_err(|e| CliError::domain(format!("csv: {e}")))
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Value> = self
                        .header
                        .iter()
                        .zip(row)
                        .map(|(k, v)| (k.to_string(), v.json()))
                        .collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }
}

pub fn json_bytes(value: &impl Serialize) -> Result<Vec<u8>, CliError> {
    let mut out = serde_json::to_vec_pretty(value).map_err(|e| CliError::domain(format!("json: {e}")))?;
    out.push(b'\n');
    Ok(out)
}

pub fn to_value(value: &impl Serialize) -> Result<Value, CliError> {
    serde_json::to_value(value).map_err(|e| CliError::domain(format!("json: {e}")))
}

/// Writes to `path`, or to standard output when there is none.
pub fn write_output(path: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, bytes).map_err(|e| CliError::io(p, e)),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes)
                .and_then(|_| out.flush())
                .map_err(|e| CliError::domain(format!("stdout: {e}")))
        }
    }
}

/// `<output>.manifest.json`.
pub fn sidecar_path(output: &Path) -> PathBuf {
    let mut name = output.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}

/// Two whitespace-separated columns, one point per line.
pub fn write_plot(path: &Path, points: impl IntoIterator<Item = (f64, f64)>) -> Result<(), CliError> {
    let mut text = String::from("# t cdf\n");
    for (t, y) in points {
        text.push_str(&format_number(t));
        text.push(' ');
        text.push_str(&format_number(y));
        text.push('\n');
    }
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}
