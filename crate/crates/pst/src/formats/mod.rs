//! Versioned text formats. Checkpoints and circuits are a TOML header, a
//! `---` line, then a CSV body; datasets are CSV with an optional `#` line
//! carrying the version and generator metadata.

pub mod checkpoint;
pub mod circuit;
pub mod dataset;
pub mod history;
pub mod report;

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{PstError, Result};

pub(crate) const HEADER_END: &str = "---";

/// Shortest decimal text that parses back to the same `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| PstError::io(path, e))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| PstError::io(dir, e))?;
    }
    std::fs::write(path, text).map_err(|e| PstError::io(path, e))
}

#[derive(Deserialize)]
struct Stamp {
    format: Option<String>,
    version: Option<i64>,
}

/// Split a document into its typed header and the body text. The body's
/// first line number in the file is returned alongside it.
pub(crate) fn parse_document<'a, H: DeserializeOwned>(
    what: &'static str,
    supported: u32,
    text: &'a str,
) -> Result<(H, &'a str, usize)> {
    let mut offset = 0;
    let mut header_lines = 0;
    let mut split = None;
    for line in text.split_inclusive('\n') {
        header_lines += 1;
        if line.trim_end() == HEADER_END {
            split = Some((&text[..offset], &text[offset + line.len()..]));
            break;
        }
        offset += line.len();
    }
    let (header, body) =
        split.ok_or_else(|| PstError::field(what, "header", format!("no `{HEADER_END}` line ending the header")))?;
    let stamp: Stamp = toml::from_str(header).map_err(|e| PstError::field(what, "header", e.message()))?;
    match stamp.format.as_deref() {
        Some(f) if f == what => {}
        Some(f) => return Err(PstError::field(what, "format", format!("expected `{what}`, found `{f}`"))),
        None => return Err(PstError::field(what, "format", "missing")),
    }
    match stamp.version {
        None => return Err(PstError::field(what, "version", "missing")),
        Some(v) if v < 1 => return Err(PstError::field(what, "version", format!("invalid version {v}"))),
        Some(v) if v > supported as i64 => {
            return Err(PstError::Version { what, found: v.min(u32::MAX as i64) as u32, supported })
        }
        Some(_) => {}
    }
    let de = toml::Deserializer::parse(header).map_err(|e| PstError::field(what, "header", e.message()))?;
    let typed: H = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        PstError::field(what, if path == "." { "header".to_string() } else { path }, inner.message())
    })?;
    Ok((typed, body, header_lines + 1))
}

pub(crate) fn render_document<H: Serialize>(header: &H, body: &str) -> Result<String> {
    let head = toml::to_string(header).map_err(|e| PstError::usage(format!("cannot serialize header: {e}")))?;
    Ok(format!("{head}{HEADER_END}\n{body}"))
}

/// CSV body reader that checks the column names and reports cell errors by
/// file line and column name.
pub(crate) struct Body<'a> {
    what: &'static str,
    first_line: usize,
    columns: Vec<String>,
    reader: csv::Reader<&'a [u8]>,
}

impl<'a> Body<'a> {
    /// `expected = None` accepts any column names.
    pub(crate) fn new(what: &'static str, body: &'a str, first_line: usize, expected: Option<&[String]>) -> Result<Body<'a>> {
        let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(body.as_bytes());
        let names: Vec<String> = reader
            .headers()
            .map_err(|e| row_error(what, first_line, "header", e))?
            .iter()
            .map(str::to_string)
            .collect();
        if expected.is_some_and(|exp| names != exp) {
            return Err(PstError::Row {
                what: what.to_string(),
                row: first_line,
                column: "header".into(),
                msg: format!("expected columns {}, found {}", expected.unwrap_or_default().join(","), names.join(",")),
            });
        }
        Ok(Body { what, first_line, columns: names, reader })
    }

    /// Next record as `(file line, cells)`.
    pub(crate) fn next_row(&mut self) -> Result<Option<(usize, csv::StringRecord)>> {
        let mut rec = csv::StringRecord::new();
        match self.reader.read_record(&mut rec) {
            Ok(false) => Ok(None),
            Ok(true) => {
                let line = self.first_line + rec.position().map_or(0, |p| p.line() as usize) - 1;
                if rec.len() != self.columns.len() {
                    return Err(PstError::Row {
                        what: self.what.to_string(),
                        row: line,
                        column: "*".into(),
                        msg: format!("{} cells, expected {}", rec.len(), self.columns.len()),
                    });
                }
                Ok(Some((line, rec)))
            }
            Err(e) => {
                let line = self.first_line + e.position().map_or(0, |p| p.line() as usize).saturating_sub(1);
                Err(row_error(self.what, line, "*", e))
            }
        }
    }

    pub(crate) fn cell<T: std::str::FromStr>(&self, line: usize, rec: &csv::StringRecord, col: usize) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        let raw = rec.get(col).unwrap_or("");
        raw.trim().parse::<T>().map_err(|e| PstError::Row {
            what: self.what.to_string(),
            row: line,
            column: self.columns[col].clone(),
            msg: format!("cannot parse {raw:?}: {e}"),
        })
    }

    pub(crate) fn columns(&self) -> &[String] {
        &self.columns
    }

    pub(crate) fn error(&self, line: usize, col: usize, msg: impl Into<String>) -> PstError {
        PstError::Row { what: self.what.to_string(), row: line, column: self.columns[col].clone(), msg: msg.into() }
    }
}

fn row_error(what: &str, row: usize, column: &str, e: impl std::fmt::Display) -> PstError {
    PstError::Row { what: what.to_string(), row, column: column.to_string(), msg: e.to_string() }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Debug, Serialize, Deserialize, PartialEq)]
    struct H {
        format: String,
        version: u32,
        tau: f64,
    }

    fn doc(version: u32) -> String {
        render_document(&H { format: "thing".into(), version, tau: 0.1 }, "a,b\n1,2\n").unwrap()
    }

    #[test]
    fn floats_round_trip() {
        for x in [0.1, 1.0 / 3.0, 1e-300, -2.5e17, f64::MIN_POSITIVE, 123456.789] {
            assert_eq!(fmt_f64(x).parse::<f64>().unwrap().to_bits(), x.to_bits());
        }
    }

    #[test]
    fn document_round_trip() {
        let text = doc(1);
        let (h, body, first): (H, _, _) = parse_document("thing", 1, &text).unwrap();
        assert_eq!(h, H { format: "thing".into(), version: 1, tau: 0.1 });
        assert_eq!(body, "a,b\n1,2\n");
        assert_eq!(text.lines().nth(first - 1), Some("a,b"));
    }

    #[test]
    fn newer_version_fails_cleanly() {
        let err = parse_document::<H>("thing", 1, &doc(2)).unwrap_err();
        assert!(matches!(err, PstError::Version { found: 2, supported: 1, .. }), "{err}");
    }

    #[test]
    fn errors_name_fields() {
        let text = doc(1).replace("tau = 0.1", "tau = \"x\"");
        let err = parse_document::<H>("thing", 1, &text).unwrap_err().to_string();
        assert!(err.contains("`tau`"), "{err}");
        let text = doc(1).replace("tau = 0.1\n", "");
        let err = parse_document::<H>("thing", 1, &text).unwrap_err().to_string();
        assert!(err.contains("tau"), "{err}");
        let err = parse_document::<H>("other", 1, &doc(1)).unwrap_err().to_string();
        assert!(err.contains("`format`"), "{err}");
        assert!(parse_document::<H>("thing", 1, "format = \"thing\"\n").is_err());
    }

    #[test]
    fn sha256_known_value() {
        assert_eq!(sha256_hex(b"abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    }
}
