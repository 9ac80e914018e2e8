//! The newline-delimited image record format.

use std::collections::HashSet;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::Result;
use crate::gl2::ImageGroup;

/// One curve: its `j`-invariant and its adelic image at level `adelic_level`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImageRecord {
    pub label: String,
    /// Exact rational, `p/q` or an integer; `null` when not known.
    pub j: Option<String>,
    pub adelic_level: u32,
    pub generators: Vec<[i64; 4]>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {field}: {message}")]
pub struct RecordError {
    pub line: usize,
    pub field: String,
    pub message: String,
}

impl RecordError {
    fn new(line: usize, field: impl Into<String>, message: impl Into<String>) -> RecordError {
        RecordError {
            line,
            field: field.into(),
            message: message.into(),
        }
    }
}

/// The thirteen rational CM `j`-invariants with their discriminants.
pub fn cm_j_invariants() -> &'static [(BigRational, i64)] {
    static TABLE: OnceLock<Vec<(BigRational, i64)>> = OnceLock::new();
    TABLE.get_or_init(|| {
        include_str!("../data/cm_j_invariants.txt")
            .lines()
            .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
            .map(|l| {
                let mut it = l.split_whitespace();
                let j = parse_rational(it.next().unwrap()).unwrap();
                let disc = it.next().unwrap().parse().unwrap();
                (j, disc)
            })
            .collect()
    })
}

/// Parse `p/q` or `p` into a reduced rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(BigRational::new(num, den))
}

/// Parse and validate one line. `line` is 1-based and only used in errors.
pub fn parse_record(text: &str, line: usize) -> std::result::Result<ImageRecord, RecordError> {
    let value: Value = serde_json::from_str(text)
        .map_err(|e| RecordError::new(line, "record", format!("malformed JSON: {e}")))?;
    let obj = value
        .as_object()
        .ok_or_else(|| RecordError::new(line, "record", "expected a JSON object"))?;

    let label = match obj.get("label") {
        Some(Value::String(s)) if !s.is_empty() => s.clone(),
        Some(Value::String(_)) => return Err(RecordError::new(line, "label", "empty label")),
        Some(_) => return Err(RecordError::new(line, "label", "expected a string")),
        None => return Err(RecordError::new(line, "label", "missing")),
    };
    let j = match obj.get("j") {
        Some(Value::String(s)) => Some(s.clone()),
        Some(Value::Null) => None,
        Some(_) => {
            return Err(RecordError::new(
                line,
                "j",
                "expected a string like \"p/q\" or null",
            ))
        }
        None => return Err(RecordError::new(line, "j", "missing")),
    };
    if let Some(j) = &j {
        let j_value = parse_rational(j)
            .ok_or_else(|| RecordError::new(line, "j", format!("not an exact rational: {j:?}")))?;
        if let Some((_, disc)) = cm_j_invariants().iter().find(|(cm, _)| *cm == j_value) {
            return Err(RecordError::new(
                line,
                "j",
                format!("j = {j} has complex multiplication (discriminant {disc})"),
            ));
        }
    }
    let adelic_level = match obj.get("adelic_level").and_then(Value::as_u64) {
        Some(n) if (1..(1 << 16)).contains(&n) => n as u32,
        Some(n) => {
            return Err(RecordError::new(
                line,
                "adelic_level",
                format!("{n} out of range 1..65535"),
            ))
        }
        None => {
            return Err(RecordError::new(
                line,
                "adelic_level",
                "expected a positive integer",
            ))
        }
    };
    let rows = obj
        .get("generators")
        .and_then(Value::as_array)
        .ok_or_else(|| {
            RecordError::new(line, "generators", "expected a list of [a, b, c, d] rows")
        })?;
    let mut generators = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let field = format!("generators[{i}]");
        let entries: Vec<i64> = row
            .as_array()
            .filter(|r| r.len() == 4)
            .and_then(|r| r.iter().map(Value::as_i64).collect())
            .ok_or_else(|| RecordError::new(line, &field, "expected four integers"))?;
        let entries = [entries[0], entries[1], entries[2], entries[3]];
        crate::gl2::Mat2::new(adelic_level, entries)
            .map_err(|e| RecordError::new(line, &field, e.to_string()))?;
        generators.push(entries);
    }
    Ok(ImageRecord {
        label,
        j,
        adelic_level,
        generators,
    })
}

/// Parse a whole file: blank lines and `#` comments are skipped, labels must
/// be unique. Each result carries its 1-based line number.
pub fn parse_records(text: &str) -> Vec<(usize, std::result::Result<ImageRecord, RecordError>)> {
    let mut seen = HashSet::new();
    text.lines()
        .enumerate()
        .filter(|(_, l)| {
            let t = l.trim();
            !t.is_empty() && !t.starts_with('#')
        })
        .map(|(i, l)| {
            let line = i + 1;
            let parsed = parse_record(l, line).and_then(|r| {
                if seen.insert(r.label.clone()) {
                    Ok(r)
                } else {
                    Err(RecordError::new(
                        line,
                        "label",
                        format!("duplicate label {:?}", r.label),
                    ))
                }
            });
            (line, parsed)
        })
        .collect()
}

impl ImageRecord {
    pub fn j_value(&self) -> Option<BigRational> {
        self.j
            .as_deref()
            .map(|j| parse_rational(j).expect("validated on parse"))
    }

    pub fn image(&self) -> Result<ImageGroup> {
        ImageGroup::from_entries(self.adelic_level, &self.generators)
    }

    /// Serialize as one line with fixed key order.
    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("plain data")
    }
}
