//! Text and JSON encodings of families and chains.
//!
//! Family JSON: `{"n": 4, "sets": [[1, 2], [3]]}` with 1-based, strictly
//! ascending elements. Plain text: one set per line, comma separated, `-`
//! for the empty set. Chains: sets separated by `<`, e.g. `1,2 < 1,2,3`.

use serde::{Deserialize, Serialize};

use crate::chains::Chain;
use crate::error::{domain, Error, Result};
use crate::lattice::{elements_of, lex_cmp, Family};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyDoc {
    pub n: usize,
    pub sets: Vec<Vec<usize>>,
}

impl FamilyDoc {
    pub fn from_family(f: &Family) -> Self {
        let mut codes = f.codes();
        codes.sort_by(|&a, &b| lex_cmp(a, b));
        FamilyDoc {
            n: f.n(),
            sets: codes.into_iter().map(elements_of).collect(),
        }
    }

    pub fn to_family(&self) -> Result<Family> {
        let mut f = Family::empty(self.n)?;
        for (idx, set) in self.sets.iter().enumerate() {
            let code = code_from_sorted(self.n, set)
                .map_err(|e| Error::Domain(format!("set #{idx}: {e}")))?;
            if !f.insert(code) {
                return domain(format!("set #{idx} {set:?} is a duplicate"));
            }
        }
        Ok(f)
    }
}

fn code_from_sorted(n: usize, set: &[usize]) -> std::result::Result<u32, String> {
    let mut code = 0u32;
    let mut prev = 0usize;
    for &e in set {
        if e == 0 || e > n {
            return Err(format!("element {e} outside [1, {n}]"));
        }
        if e <= prev {
            return Err(format!(
                "elements must be strictly ascending ({prev} then {e})"
            ));
        }
        prev = e;
        code |= 1 << (e - 1);
    }
    Ok(code)
}

/// Maps a JSON error onto [`Error::Parse`] with its line and column.
pub fn json_error(e: serde_json::Error) -> Error {
    Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

pub fn parse_family_json(text: &str) -> Result<Family> {
    let doc: FamilyDoc = serde_json::from_str(text).map_err(json_error)?;
    doc.to_family()
}

pub fn family_to_json(f: &Family) -> String {
    serde_json::to_string(&FamilyDoc::from_family(f)).expect("plain data")
}

/// Parses one set: comma separated 1-based elements, `-` (or blank) for the
/// empty set. Elements may appear in any order here; duplicates are rejected.
pub fn parse_set(n: usize, text: &str) -> Result<u32> {
    let t = text.trim();
    if t.is_empty() || t == "-" {
        return Ok(0);
    }
    let mut code = 0u32;
    for tok in t.split(',') {
        let tok = tok.trim();
        let e: usize = tok
            .parse()
            .map_err(|_| Error::Domain(format!("'{tok}' is not an element")))?;
        if e == 0 || e > n {
            return domain(format!("element {e} outside [1, {n}]"));
        }
        if code >> (e - 1) & 1 == 1 {
            return domain(format!("element {e} repeated"));
        }
        code |= 1 << (e - 1);
    }
    Ok(code)
}

pub fn format_set(code: u32) -> String {
    if code == 0 {
        return "-".to_string();
    }
    elements_of(code)
        .iter()
        .map(|e| e.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

pub fn parse_family_text(n: usize, text: &str) -> Result<Family> {
    let mut f = Family::empty(n)?;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let code = parse_set(n, line).map_err(|e| Error::Parse {
            line: lineno + 1,
            column: 1,
            message: e.to_string(),
        })?;
        if !f.insert(code) {
            return Err(Error::Parse {
                line: lineno + 1,
                column: 1,
                message: format!("duplicate set {line}"),
            });
        }
    }
    Ok(f)
}

pub fn family_to_text(f: &Family) -> String {
    let mut codes = f.codes();
    codes.sort_by(|&a, &b| lex_cmp(a, b));
    let mut out = String::new();
    for c in codes {
        out.push_str(&format_set(c));
        out.push('\n');
    }
    out
}

pub fn parse_chain(n: usize, text: &str) -> Result<Chain> {
    let sets = text
        .split('<')
        .map(|s| parse_set(n, s))
        .collect::<Result<Vec<_>>>()?;
    Chain::new(n, sets)
}

pub fn format_chain(chain: &Chain) -> String {
    chain
        .sets()
        .iter()
        .map(|&c| format_set(c))
        .collect::<Vec<_>>()
        .join(" < ")
}
