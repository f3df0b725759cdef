//! Delimited text tables with a `# config_hash=` comment line.

use crate::error::{Error, Result};
use std::fmt::Write as _;
use std::path::Path;

/// 17 significant digits, `inf`/`-inf` for infinities.
pub fn fmt_f64(x: f64) -> String {
    if x == f64::INFINITY {
        "inf".into()
    } else if x == f64::NEG_INFINITY {
        "-inf".into()
    } else if x.is_nan() {
        "nan".into()
    } else {
        format!("{x:.16e}")
    }
}

pub fn parse_f64(s: &str) -> Option<f64> {
    match s {
        "inf" => Some(f64::INFINITY),
        "-inf" => Some(f64::NEG_INFINITY),
        _ => s.parse().ok(),
    }
}

pub(crate) fn table(
    config_hash: &str,
    header: &[&str],
    rows: impl IntoIterator<Item = Vec<String>>,
) -> String {
    let mut out = String::new();
    writeln!(out, "# config_hash={config_hash}").unwrap();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// A parsed table: the config hash from the comment line, if any, and the
/// data rows with their 1-based line numbers.
pub(crate) struct Table<'p> {
    pub path: &'p Path,
    pub config_hash: Option<String>,
    pub rows: Vec<(usize, Vec<String>)>,
}

impl Table<'_> {
    pub fn error(&self, line: usize, msg: impl Into<String>) -> Error {
        Error::Parse {
            path: self.path.to_path_buf(),
            line,
            msg: msg.into(),
        }
    }

    pub fn f64(&self, line: usize, field: &str) -> Result<f64> {
        parse_f64(field).ok_or_else(|| self.error(line, format!("not a number: {field:?}")))
    }

    pub fn int<T: std::str::FromStr>(&self, line: usize, field: &str) -> Result<T> {
        field
            .parse()
            .map_err(|_| self.error(line, format!("not an integer: {field:?}")))
    }
}

pub(crate) fn read_table<'p>(path: &'p Path, header: &[&str]) -> Result<Table<'p>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
    let mut table = Table {
        path,
        config_hash: None,
        rows: Vec::new(),
    };
    let mut seen_header = false;
    for (k, line) in text.lines().enumerate() {
        let n = k + 1;
        if let Some(comment) = line.strip_prefix('#') {
            if let Some(h) = comment.trim().strip_prefix("config_hash=") {
                table.config_hash = Some(h.to_string());
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<String> = line.split(',').map(|f| f.trim().to_string()).collect();
        if !seen_header {
            if fields != header {
                return Err(table.error(n, format!("expected header {:?}", header.join(","))));
            }
            seen_header = true;
            continue;
        }
        if fields.len() != header.len() {
            return Err(table.error(
                n,
                format!("expected {} fields, found {}", header.len(), fields.len()),
            ));
        }
        table.rows.push((n, fields));
    }
    if !seen_header {
        return Err(table.error(1, "missing header"));
    }
    Ok(table)
}

pub(crate) fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| Error::io(format!("writing {}", path.display()), e))
}
