//! Reading documents given on the command line.
//!
//! Every JSON input may be either a bare document or a full report
//! (`{"manifest": …, "result": …}`) emitted by this tool, in which case the
//! `result` member is used.

use std::path::Path;

use chainlattice::io::{json_error, parse_chain, parse_family_json, parse_family_text, parse_set};
use chainlattice::{Chain, Error, Family, Result, StepVector};
use serde_json::Value;

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Domain(format!("cannot read {}: {e}", path.display())))
}

/// The document text, unwrapped from a report envelope if needed. Parse
/// errors in bare documents keep their original line and column.
pub fn document(text: &str) -> Result<String> {
    let v: Value = serde_json::from_str(text).map_err(json_error)?;
    match v {
        Value::Object(m) if m.contains_key("manifest") && m.contains_key("result") => {
            Ok(serde_json::to_string_pretty(&m["result"]).expect("plain data"))
        }
        _ => Ok(text.to_string()),
    }
}

pub fn read_document(path: &Path) -> Result<String> {
    document(&read_text(path)?)
}

/// A family file: JSON when it starts with `{`, otherwise one set per line,
/// which needs `n`.
pub fn read_family(path: &Path, n: Option<usize>) -> Result<Family> {
    let text = read_text(path)?;
    let f = if text.trim_start().starts_with('{') {
        parse_family_json(&document(&text)?)?
    } else {
        let n = n.ok_or_else(|| Error::Domain(format!("{}: text families need -n", path.display())))?;
        parse_family_text(n, &text)?
    };
    if let Some(n) = n {
        if n != f.n() {
            return Err(Error::Domain(format!("{} lives in P({}), not P({n})", path.display(), f.n())));
        }
    }
    Ok(f)
}

pub fn chain(n: usize, text: &str) -> Result<Chain> {
    parse_chain(n, text)
}

pub fn set(n: usize, text: &str) -> Result<u32> {
    parse_set(n, text)
}

pub fn steps(text: &str) -> Result<StepVector> {
    text.parse()
}
