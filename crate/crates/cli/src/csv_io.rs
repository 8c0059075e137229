//! Minimal deterministic CSV emission: rows are pre-rendered strings and
//! floats use Rust's shortest round-trip formatting, so a fixed run produces
//! byte-identical files.

use std::fs;
use std::path::Path;

pub fn write_csv<I>(path: &Path, header: &str, rows: I) -> std::io::Result<()>
where
    I: IntoIterator<Item = String>,
{
    let mut text = String::with_capacity(1024);
    text.push_str(header);
    text.push('\n');
    for row in rows {
        text.push_str(&row);
        text.push('\n');
    }
    fs::write(path, text)
}

pub fn fmt_opt(value: Option<f64>) -> String {
    value.map(|v| v.to_string()).unwrap_or_default()
}
