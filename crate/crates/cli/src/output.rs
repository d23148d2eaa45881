//! Deterministic report assembly: fixed float formatting, fixed row order,
//! LF line endings. Identical configuration must yield byte-identical CSV.

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use serde::Serialize;

/// 15-significant-digit scientific notation for every real column.
/// Negative zero is normalized so reports stay byte-stable.
pub fn sci(v: f64) -> String {
    let v = if v == 0.0 { 0.0 } else { v };
    format!("{:.14e}", v)
}

pub fn sci_opt(v: Option<f64>) -> String {
    v.map(sci).unwrap_or_default()
}

/// Assemble a CSV body from a header and preformatted rows.
pub fn csv(header: &str, rows: &[Vec<String>]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(header);
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// JSON report: a config echo object plus the row array.
pub fn json<C: Serialize, R: Serialize>(config: &C, rows: &[R]) -> String {
    let report = serde_json::json!({ "config": config, "rows": rows });
    let mut text = serde_json::to_string_pretty(&report).expect("report serializes");
    text.push('\n');
    text
}

/// Write to the output path, or stdout when none is given.
pub fn emit(text: &str, out: Option<&PathBuf>) -> io::Result<()> {
    match out {
        Some(path) => File::create(path)?.write_all(text.as_bytes()),
        None => io::stdout().write_all(text.as_bytes()),
    }
}
