//! Report envelopes and the json / csv / human renderers.

use chainlattice::Error;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::Format;

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Manifest {
    pub command_line: String,
    pub version: String,
    pub seed: u64,
    pub rng: String,
    pub workers: usize,
    pub available_parallelism: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u128>,
}

#[derive(Debug, Default)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(headers: &[&str]) -> Self {
        Table { headers: headers.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }
}

/// What a subcommand produced. `result` is the machine-readable payload and
/// is what `--in`/`--family` read back; `summary` holds side facts.
#[derive(Debug)]
pub struct Outcome {
    pub result: Value,
    pub summary: Option<Value>,
    pub table: Option<Table>,
    /// Verification failed; exit 1.
    pub failed: bool,
}

pub fn to_value(v: &impl Serialize) -> Result<Value, Error> {
    serde_json::to_value(v).map_err(|e| Error::Resource(format!("report serialization: {e}")))
}

impl Outcome {
    pub fn new(result: &impl Serialize) -> Result<Self, Error> {
        Ok(Outcome { result: to_value(result)?, summary: None, table: None, failed: false })
    }

    pub fn with_summary(mut self, summary: Value) -> Self {
        self.summary = Some(summary);
        self
    }

    pub fn with_table(mut self, table: Table) -> Self {
        self.table = Some(table);
        self
    }

    pub fn failed_if(mut self, failed: bool) -> Self {
        self.failed = failed;
        self
    }
}

fn strip_timing(v: &mut Value) {
    match v {
        Value::Object(m) => {
            m.remove("elapsedMs");
            m.values_mut().for_each(strip_timing);
        }
        Value::Array(a) => a.iter_mut().for_each(strip_timing),
        _ => {}
    }
}

pub fn emit(manifest: &Manifest, outcome: &Outcome, format: Format, no_timing: bool) -> Result<Vec<u8>, Error> {
    let mut result = outcome.result.clone();
    let mut summary = outcome.summary.clone();
    if no_timing {
        strip_timing(&mut result);
        summary.iter_mut().for_each(strip_timing);
    }
    let manifest = to_value(manifest)?;
    match format {
        Format::Json => {
            let mut doc = Map::new();
            doc.insert("manifest".into(), manifest);
            doc.insert("result".into(), result);
            if let Some(s) = summary {
                doc.insert("summary".into(), s);
            }
            let mut text = serde_json::to_string_pretty(&Value::Object(doc))
                .map_err(|e| Error::Resource(e.to_string()))?;
            text.push('\n');
            Ok(text.into_bytes())
        }
        Format::Csv => csv_bytes(&manifest, &result, summary.as_ref(), outcome.table.as_ref()),
        Format::Human => {
            let mut out = String::new();
            human(&mut out, "manifest", &manifest, 0);
            if let Some(s) = &summary {
                human(&mut out, "summary", s, 0);
            }
            human(&mut out, "result", &result, 0);
            Ok(out.into_bytes())
        }
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn csv_bytes(manifest: &Value, result: &Value, summary: Option<&Value>, table: Option<&Table>) -> Result<Vec<u8>, Error> {
    let mut out = Vec::new();
    for src in [Some(manifest), summary].into_iter().flatten() {
        if let Value::Object(m) = src {
            for (k, v) in m {
                out.extend_from_slice(format!("# {k}: {}\n", cell(v)).as_bytes());
            }
        }
    }
    let fallback;
    let table = match table {
        Some(t) => t,
        None => {
            let mut t = Table::new(&["key", "value"]);
            if let Value::Object(m) = result {
                for (k, v) in m {
                    t.push(vec![k.clone(), cell(v)]);
                }
            } else {
                t.push(vec!["result".into(), cell(result)]);
            }
            fallback = t;
            &fallback
        }
    };
    let mut w = csv::Writer::from_writer(&mut out);
    let err = |e: csv::Error| Error::Resource(format!("csv output: {e}"));
    w.write_record(&table.headers).map_err(err)?;
    for row in &table.rows {
        w.write_record(row).map_err(err)?;
    }
    w.flush().map_err(|e| Error::Resource(e.to_string()))?;
    drop(w);
    Ok(out)
}

/// `p/q` strings get a decimal next to them.
fn decorate(s: &str) -> String {
    if let Some((p, q)) = s.split_once('/') {
        if let (Ok(p), Ok(q)) = (p.parse::<f64>(), q.parse::<f64>()) {
            if q != 0.0 {
                return format!("{s} (≈ {:.6e})", p / q);
            }
        }
    }
    s.to_string()
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(decorate(s)),
        Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()) => {
            Some(format!("[{}]", a.iter().map(|x| scalar(x).unwrap_or_default()).collect::<Vec<_>>().join(", ")))
        }
        Value::Object(_) | Value::Array(_) => None,
        other => Some(other.to_string()),
    }
}

fn human(out: &mut String, key: &str, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    if let Some(s) = scalar(v) {
        out.push_str(&format!("{pad}{key}: {s}\n"));
        return;
    }
    out.push_str(&format!("{pad}{key}:\n"));
    match v {
        Value::Object(m) => m.iter().for_each(|(k, x)| human(out, k, x, depth + 1)),
        Value::Array(a) => a.iter().enumerate().for_each(|(i, x)| human(out, &format!("[{i}]"), x, depth + 1)),
        _ => unreachable!(),
    }
}
