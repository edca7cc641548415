use std::fmt;
use std::io::Write;

use serde_json::{json, Value};

use crate::args::Format;

/// A failure with its exit code class and machine-readable code.
#[derive(Debug)]
pub struct Failure {
    pub validation: bool,
    pub code: String,
    pub message: String,
}

impl Failure {
    pub fn validation(code: &str, message: impl Into<String>) -> Self {
        Failure {
            validation: true,
            code: code.into(),
            message: message.into(),
        }
    }

    pub fn computation(code: &str, message: impl Into<String>) -> Self {
        Failure {
            validation: false,
            code: code.into(),
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        if self.validation {
            1
        } else {
            2
        }
    }

    pub fn to_json(&self) -> Value {
        json!({"schema": chebotarev_core::SCHEMA_VERSION, "error": {"code": self.code, "message": self.message}})
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.code, self.message)
    }
}

impl From<chebotarev_core::Error> for Failure {
    fn from(e: chebotarev_core::Error) -> Self {
        Failure {
            validation: e.is_validation(),
            code: e.code().into(),
            message: e.to_string(),
        }
    }
}

pub type CliResult<T> = Result<T, Failure>;

/// Rows with a header, emitted as CSV.
#[derive(Debug, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

/// A subcommand's result: always JSON, optionally tabular.
pub struct Report {
    pub json: Value,
    pub table: Option<Table>,
    pub default_format: Format,
    /// Whether the run should exit with a computation failure after emitting.
    pub failed: bool,
}

impl Report {
    pub fn both(json: Value, table: Table, default_format: Format) -> Self {
        Report {
            json,
            table: Some(table),
            default_format,
            failed: false,
        }
    }

    pub fn render(&self, format: Option<Format>) -> CliResult<Vec<u8>> {
        match format.unwrap_or(self.default_format) {
            Format::Json => {
                let mut out = serde_json::to_vec_pretty(&self.json)
                    .map_err(|e| Failure::computation("serialization", e.to_string()))?;
                out.push(b'\n');
                Ok(out)
            }
            Format::Csv => {
                let table = self.table.as_ref().ok_or_else(|| {
                    Failure::validation("unsupported_format", "this report has no CSV form")
                })?;
                let mut w = csv::Writer::from_writer(Vec::new());
                let io = |e: csv::Error| Failure::computation("io", e.to_string());
                w.write_record(&table.header).map_err(io)?;
                for row in &table.rows {
                    w.write_record(row).map_err(io)?;
                }
                w.into_inner()
                    .map_err(|e| Failure::computation("io", e.to_string()))
            }
        }
    }
}

pub fn emit(bytes: &[u8], output: &str) -> CliResult<()> {
    let io = |e: std::io::Error| Failure::computation("io", format!("{output}: {e}"));
    if output == "-" {
        let mut out = std::io::stdout().lock();
        out.write_all(bytes).map_err(io)?;
        out.flush().map_err(io)
    } else {
        std::fs::write(output, bytes).map_err(io)
    }
}

/// Shortest round-trip text for a float, exponent form outside [1e-5, 1e16);
/// empty for non-finite values.
pub fn num(v: f64) -> String {
    let a = v.abs();
    if !v.is_finite() {
        String::new()
    } else if a != 0.0 && !(1e-5..1e16).contains(&a) {
        format!("{v:e}")
    } else {
        format!("{v}")
    }
}

pub fn joined(values: &[usize]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}
