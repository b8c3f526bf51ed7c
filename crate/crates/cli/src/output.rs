//! Output formatting: CSV with `#`-prefixed metadata lines and JSON with an
//! embedded `config` object.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;

/// Formats a float with at least six significant digits, switching to
/// scientific notation outside a readable range. Integers stored as floats
/// keep their exact digits.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let a = x.abs();
    if !(1e-4..1e7).contains(&a) {
        return format!("{x:.6e}");
    }
    let digits = (6 - 1 - a.log10().floor() as i64).max(0) as usize;
    format!("{x:.digits$}")
}

/// RFC-4180-style field quoting: only when the field needs it.
pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// A CSV document: metadata comments, one header, data rows.
pub struct Csv {
    lines: Vec<String>,
}

impl Csv {
    pub fn new(meta: &BTreeMap<String, String>, header: &[&str]) -> Self {
        let mut lines: Vec<String> = meta
            .iter()
            .map(|(k, v)| format!("# {k}={v}"))
            .collect();
        lines.push(
            header
                .iter()
                .map(|h| csv_field(h))
                .collect::<Vec<_>>()
                .join(","),
        );
        Self { lines }
    }

    pub fn row(&mut self, fields: &[String]) {
        self.lines.push(
            fields
                .iter()
                .map(|f| csv_field(f))
                .collect::<Vec<_>>()
                .join(","),
        );
    }

    pub fn finish(self) -> String {
        let mut s = self.lines.join("\n");
        s.push('\n');
        s
    }
}

/// Serializes a JSON value with a trailing newline.
pub fn json_to_string(value: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable value");
    s.push('\n');
    s
}

/// Metadata map rendered as a JSON object (string values keep their exact
/// CLI spelling).
pub fn meta_to_json(meta: &BTreeMap<String, String>) -> serde_json::Value {
    let mut obj = serde_json::Map::new();
    for (k, v) in meta {
        obj.insert(k.clone(), serde_json::Value::String(v.clone()));
    }
    serde_json::Value::Object(obj)
}

/// Writes to the path, or stdout when no path is given.
pub fn emit(output: Option<&std::path::Path>, content: &str) -> std::io::Result<()> {
    match output {
        Some(path) => fs::write(path, content),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(content.as_bytes())
        }
    }
}
