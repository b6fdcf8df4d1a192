//! Artifact rendering: a metadata header followed by rows, as JSON or CSV.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use ford_spheres::moment::{ConstantsBundle, Method, MomentReport, Normalization};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Debug, Serialize)]
pub struct Config {
    pub command: String,
    pub parameters: Value,
    pub seed: u64,
    pub output_format: Format,
}

#[derive(Clone, Debug, Serialize)]
pub struct Metadata {
    pub tool: &'static str,
    pub version: &'static str,
    pub config: Config,
    pub constants: ConstantsBundle,
    #[serde(flatten)]
    pub extra: BTreeMap<String, Value>,
}

impl Metadata {
    pub fn new(
        command: &str,
        parameters: Value,
        seed: u64,
        output_format: Format,
        constants: ConstantsBundle,
        extra: BTreeMap<String, Value>,
    ) -> Self {
        Self {
            tool: env!("CARGO_BIN_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            config: Config {
                command: command.to_string(),
                parameters,
                seed,
                output_format,
            },
            constants,
            extra,
        }
    }
}

/// One CSV/JSON row of a moment table.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentRow {
    #[serde(rename = "S")]
    pub s_max: u64,
    pub method: Method,
    pub normalization: Option<Normalization>,
    pub value: f64,
    pub main_term: f64,
    pub residual: f64,
    pub elapsed_s: Option<f64>,
    /// Counting value times the calibration constant.
    pub calibrated_value: Option<f64>,
    /// `residual / S^(1 + eps)`.
    pub residual_scaled: f64,
}

impl MomentRow {
    pub fn new(r: &MomentReport, calibration: Option<f64>, epsilon: f64) -> Self {
        Self {
            s_max: r.s_max,
            method: r.method,
            normalization: r.normalization,
            value: r.value,
            main_term: r.main_term,
            residual: r.residual,
            elapsed_s: r.elapsed,
            calibrated_value: match r.method {
                Method::Counting => calibration.map(|c| c * r.value),
                _ => None,
            },
            residual_scaled: r.residual / (r.s_max as f64).powf(1.0 + epsilon),
        }
    }
}

enum Body {
    Table(Vec<Value>),
    Record(Value),
    Moment(Vec<MomentRow>),
    Checks { rows: Vec<Value>, failed: usize },
}

pub struct Artifact {
    meta: Metadata,
    body: Body,
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

impl Artifact {
    pub fn table(meta: Metadata, rows: Vec<Value>) -> Self {
        Self { meta, body: Body::Table(rows) }
    }

    pub fn record(meta: Metadata, record: Value) -> Self {
        Self { meta, body: Body::Record(record) }
    }

    pub fn moment(meta: Metadata, rows: Vec<MomentRow>) -> Self {
        Self { meta, body: Body::Moment(rows) }
    }

    pub fn checks(meta: Metadata, rows: Vec<Value>, failed: usize) -> Self {
        Self { meta, body: Body::Checks { rows, failed } }
    }

    pub fn failed_checks(&self) -> Option<usize> {
        match self.body {
            Body::Checks { failed, .. } => Some(failed),
            _ => None,
        }
    }

    pub fn render(&self, format: Format) -> Result<String, String> {
        match format {
            Format::Json => self.render_json(),
            Format::Csv => self.render_csv(),
        }
    }

    fn render_json(&self) -> Result<String, String> {
        let body = match &self.body {
            Body::Table(rows) | Body::Checks { rows, .. } => json!({ "rows": rows }),
            Body::Record(r) => json!({ "result": r }),
            Body::Moment(rows) => json!({ "rows": rows }),
        };
        let doc = json!({ "metadata": self.meta, "body": body });
        let mut text = serde_json::to_string_pretty(&doc).map_err(|e| e.to_string())?;
        text.push('\n');
        Ok(text)
    }

    fn render_csv(&self) -> Result<String, String> {
        let mut out = String::new();
        let meta = serde_json::to_value(&self.meta).map_err(|e| e.to_string())?;
        if let Value::Object(map) = meta {
            for (k, v) in map {
                let _ = writeln!(out, "# {k}: {v}");
            }
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        let rows: Vec<Value> = match &self.body {
            Body::Moment(rows) => {
                for row in rows {
                    w.serialize(row).map_err(|e| e.to_string())?;
                }
                Vec::new()
            }
            Body::Record(Value::Object(map)) => map.iter().map(|(k, v)| json!({"key": k, "value": v})).collect(),
            Body::Record(other) => vec![json!({ "value": other })],
            Body::Table(rows) | Body::Checks { rows, .. } => rows.clone(),
        };
        if let Some(Value::Object(first)) = rows.first() {
            let header: Vec<&String> = first.keys().collect();
            w.write_record(&header).map_err(|e| e.to_string())?;
            for row in &rows {
                let record: Vec<String> = header.iter().map(|k| cell(&row[k.as_str()])).collect();
                w.write_record(&record).map_err(|e| e.to_string())?;
            }
        }
        let bytes = w.into_inner().map_err(|e| e.to_string())?;
        out.push_str(&String::from_utf8(bytes).map_err(|e| e.to_string())?);
        Ok(out)
    }

    /// Plain-text summary for the terminal.
    pub fn human_table(&self) -> String {
        let mut out = String::new();
        match &self.body {
            Body::Table(rows) => {
                for row in rows {
                    let _ = writeln!(out, "{}", cell(&row["fraction"]));
                }
            }
            Body::Record(Value::Object(map)) => {
                for (k, v) in map {
                    let _ = writeln!(out, "{k:<24} {}", cell(v));
                }
            }
            Body::Record(other) => {
                let _ = writeln!(out, "{other}");
            }
            Body::Moment(rows) => {
                let _ = writeln!(
                    out,
                    "{:>5}  {:<9}  {:<13}  {:>14}  {:>14}  {:>14}",
                    "S", "method", "normalization", "value", "main_term", "residual"
                );
                for r in rows {
                    let norm = r.normalization.map(|n| n.to_string()).unwrap_or_default();
                    let _ = writeln!(
                        out,
                        "{:>5}  {:<9}  {:<13}  {:>14.6}  {:>14.6}  {:>14.6}",
                        r.s_max, r.method.to_string(), norm, r.value, r.main_term, r.residual
                    );
                }
            }
            Body::Checks { rows, failed } => {
                for row in rows {
                    let status = if row["passed"] == Value::Bool(true) { "PASS" } else { "FAIL" };
                    let _ = writeln!(
                        out,
                        "{status}  [{}] {}: {}",
                        cell(&row["suite"]),
                        cell(&row["name"]),
                        cell(&row["detail"])
                    );
                }
                let _ = writeln!(out, "{} checks, {failed} failed", rows.len());
            }
        }
        out
    }
}
