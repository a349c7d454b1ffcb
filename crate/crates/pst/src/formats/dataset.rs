//! Dataset CSV: an optional `# pst-dataset version=1 ...` line, a column
//! header, then one sample per row.

use std::collections::BTreeMap;
use std::path::Path;

use pst_core::data::{Dataset, DatasetMeta};

use super::{fmt_f64, read_text, write_text, Body};
use crate::error::{PstError, Result};

pub const DATASET_VERSION: u32 = 1;
const MAGIC: &str = "# pst-dataset";

/// Which column holds the class label.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum LabelColumn {
    /// A column named `label`, else the last column.
    #[default]
    Auto,
    Name(String),
    Index(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CsvSchema {
    pub label: LabelColumn,
    /// Class count; defaults to the file's metadata, else `max label + 1`.
    pub classes: Option<usize>,
}

fn meta_line(ds: &Dataset, split: &str) -> String {
    let m = &ds.meta;
    // Values must not contain spaces; params use `;` between pairs.
    let clean = |s: &str| s.replace(' ', "_");
    format!(
        "{MAGIC} version={DATASET_VERSION} kind={} params={} noise={} seed={} classes={} split={} source={}",
        clean(if m.kind.is_empty() { "-" } else { &m.kind }),
        clean(if m.params.is_empty() { "-" } else { &m.params }),
        fmt_f64(m.noise),
        m.seed,
        ds.classes(),
        clean(split),
        clean(if m.source.is_empty() { "-" } else { &m.source }),
    )
}

pub fn render_dataset(ds: &Dataset, split: &str) -> String {
    let mut out = meta_line(ds, split);
    out.push('\n');
    let cols: Vec<String> = (0..ds.dim()).map(|i| format!("x{i}")).collect();
    out.push_str(&cols.join(","));
    out.push_str(",label\n");
    for (x, y) in ds.features().iter().zip(ds.labels()) {
        for v in x {
            out.push_str(&fmt_f64(*v));
            out.push(',');
        }
        out.push_str(&y.to_string());
        out.push('\n');
    }
    out
}

pub fn save_csv(path: &Path, ds: &Dataset, split: &str) -> Result<()> {
    write_text(path, &render_dataset(ds, split))
}

fn parse_meta(line: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for tok in line[MAGIC.len()..].split_whitespace() {
        let (k, v) = tok
            .split_once('=')
            .ok_or_else(|| PstError::field("pst-dataset", "metadata", format!("token {tok:?} is not key=value")))?;
        map.insert(k.to_string(), v.to_string());
    }
    match map.get("version").map(|v| v.parse::<u32>()) {
        None => return Err(PstError::field("pst-dataset", "version", "missing")),
        Some(Err(e)) => return Err(PstError::field("pst-dataset", "version", e)),
        Some(Ok(v)) if v > DATASET_VERSION => {
            return Err(PstError::Version { what: "pst-dataset", found: v, supported: DATASET_VERSION })
        }
        Some(Ok(_)) => {}
    }
    Ok(map)
}

/// Parse dataset text. `origin` names the source in errors and metadata.
pub fn parse_dataset(text: &str, origin: &str, schema: &CsvSchema) -> Result<Dataset> {
    let (meta, body, first_line) = match text.strip_prefix(MAGIC) {
        Some(_) => {
            let end = text.find('\n').unwrap_or(text.len());
            (Some(parse_meta(text[..end].trim_end())?), &text[(end + 1).min(text.len())..], 2)
        }
        None => (None, text, 1),
    };
    let mut reader = Body::new("dataset", body, first_line, None)?;
    let columns = reader.columns().to_vec();
    let label_col = match &schema.label {
        LabelColumn::Auto => columns.iter().position(|c| c == "label").unwrap_or(columns.len().saturating_sub(1)),
        LabelColumn::Name(n) => columns
            .iter()
            .position(|c| c == n)
            .ok_or_else(|| PstError::usage(format!("{origin}: no column named `{n}`")))?,
        LabelColumn::Index(i) if *i < columns.len() => *i,
        LabelColumn::Index(i) => return Err(PstError::usage(format!("{origin}: label column {i} out of range"))),
    };
    if columns.len() < 2 {
        return Err(PstError::usage(format!("{origin}: need at least one feature column and a label column")));
    }
    let mut features = Vec::new();
    let mut labels = Vec::new();
    while let Some((line, rec)) = reader.next_row()? {
        let mut x = Vec::with_capacity(columns.len() - 1);
        for c in (0..columns.len()).filter(|&c| c != label_col) {
            let v: f64 = reader.cell(line, &rec, c)?;
            if !v.is_finite() {
                return Err(reader.error(line, c, "non-finite value"));
            }
            x.push(v);
        }
        features.push(x);
        labels.push(reader.cell::<usize>(line, &rec, label_col)?);
    }
    if features.is_empty() {
        return Err(PstError::Core(pst_core::Error::Empty("dataset")));
    }
    let get = |k: &str| meta.as_ref().and_then(|m| m.get(k)).filter(|v| v.as_str() != "-").cloned();
    let classes = schema
        .classes
        .or_else(|| get("classes").and_then(|c| c.parse().ok()))
        .unwrap_or_else(|| labels.iter().max().map_or(2, |m| (m + 1).max(2)));
    let meta = DatasetMeta {
        kind: get("kind").unwrap_or_else(|| "csv".into()),
        params: get("params").unwrap_or_default(),
        noise: get("noise").and_then(|v| v.parse().ok()).unwrap_or(0.0),
        seed: get("seed").and_then(|v| v.parse().ok()).unwrap_or(0),
        source: origin.to_string(),
    };
    Ok(Dataset::new(features, labels, classes, meta)?)
}

pub fn load_csv(path: &Path, schema: &CsvSchema) -> Result<Dataset> {
    let text = read_text(path)?;
    parse_dataset(&text, &path.display().to_string(), schema)
}

#[cfg(test)]
mod tests {
    use super::*;
    use pst_core::data::{gen_dataset, DatasetKind};

    #[test]
    fn round_trip_is_exact() {
        let ds = gen_dataset(DatasetKind::Moons, 50, 0.5, 3).unwrap();
        let text = render_dataset(&ds, "train");
        let back = parse_dataset(&text, "mem", &CsvSchema::default()).unwrap();
        assert_eq!(back.features(), ds.features());
        assert_eq!(back.labels(), ds.labels());
        assert_eq!(back.meta.kind, ds.meta.kind);
        assert_eq!(back.meta.seed, 3);
        assert_eq!(render_dataset(&back, "train").lines().skip(1).collect::<Vec<_>>(), text.lines().skip(1).collect::<Vec<_>>());
    }

    #[test]
    fn plain_csv_without_metadata() {
        let ds = parse_dataset("a,b,y\n1,2,0\n3,4,1\n5,6.5,1\n", "toy", &CsvSchema { label: LabelColumn::Name("y".into()), classes: None }).unwrap();
        assert_eq!(ds.len(), 3);
        assert_eq!(ds.features()[2], vec![5.0, 6.5]);
        assert_eq!(ds.classes(), 2);
        let first = parse_dataset("y,a,b\n1,2,0\n0,4,1\n", "toy", &CsvSchema { label: LabelColumn::Index(0), classes: Some(3) }).unwrap();
        assert_eq!(first.labels(), &[1, 0]);
        assert_eq!(first.classes(), 3);
    }

    #[test]
    fn bad_cell_names_row_and_column() {
        let err = parse_dataset("x0,x1,label\n1,2,0\n3,oops,1\n", "toy", &CsvSchema::default()).unwrap_err().to_string();
        assert!(err.contains("row 3") && err.contains("`x1`"), "{err}");
        let err = parse_dataset("x0,x1,label\n1,2,0\n3,4\n", "toy", &CsvSchema::default()).unwrap_err().to_string();
        assert!(err.contains("row 3"), "{err}");
        let err = parse_dataset("x0,x1,label\n1,2,-1\n", "toy", &CsvSchema::default()).unwrap_err().to_string();
        assert!(err.contains("`label`"), "{err}");
    }

    #[test]
    fn metadata_line_offsets_rows_and_checks_version() {
        let text = "# pst-dataset version=1 kind=toy classes=2\nx0,label\n1,0\nbad,1\n";
        let err = parse_dataset(text, "toy", &CsvSchema::default()).unwrap_err().to_string();
        assert!(err.contains("row 4"), "{err}");
        let err = parse_dataset("# pst-dataset version=9\nx0,label\n1,0\n", "toy", &CsvSchema::default()).unwrap_err();
        assert!(matches!(err, PstError::Version { found: 9, .. }));
    }
}
