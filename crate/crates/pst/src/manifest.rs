//! One JSON manifest per command run: the effective config, seeds, fixed
//! conventions, artifact hashes, timings and headline results.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::ConfigFile;
use crate::error::{PstError, Result};
use crate::formats::{read_text, sha256_hex, write_text};

pub const MANIFEST_VERSION: u32 = 1;
pub const MANIFEST_FILE: &str = "manifest.json";

/// Conventions the results depend on, echoed so that a reader of the
/// manifest does not need the source.
pub fn conventions() -> BTreeMap<String, String> {
    [
        ("grid_order", "index 3(a+1)+(b+1), a outer"),
        ("gate_id", "sum (t_i+1) 3^i over the grid"),
        ("round_ties", "away from zero"),
        ("argmax_ties", "lowest class index"),
        ("group_sum", "contiguous groups of width/k, divided by tau"),
        ("lambda_update", "every step, lambda_max (t/T)^gamma with t = step + 1"),
        ("selective_ties", "stable sample order; coverage r keeps ceil(r n)"),
        ("unknown_fraction", "share of output-layer trits equal to 0"),
        ("encoder_band_ties", "value exactly on a threshold with delta = 0 encodes FALSE"),
        ("parallelism", "serial"),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v.to_string()))
    .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub format: String,
    pub version: u32,
    pub command: String,
    pub tool_version: String,
    pub config: Option<ConfigFile>,
    pub seeds: BTreeMap<String, u64>,
    pub decisions: BTreeMap<String, String>,
    /// File name to SHA-256 of its bytes.
    pub artifacts: BTreeMap<String, String>,
    pub timings_ms: BTreeMap<String, f64>,
    pub results: BTreeMap<String, Value>,
}

impl Manifest {
    pub fn new(command: &str) -> Manifest {
        Manifest {
            format: "pst-manifest".into(),
            version: MANIFEST_VERSION,
            command: command.into(),
            tool_version: env!("CARGO_PKG_VERSION").into(),
            config: None,
            seeds: BTreeMap::new(),
            decisions: conventions(),
            artifacts: BTreeMap::new(),
            timings_ms: BTreeMap::new(),
            results: BTreeMap::new(),
        }
    }

    pub fn seed(&mut self, name: &str, seed: u64) {
        self.seeds.insert(name.into(), seed);
    }

    pub fn result(&mut self, name: &str, value: impl Into<Value>) {
        self.results.insert(name.into(), value.into());
    }

    /// Write `text` to `dir/name` and record its hash.
    pub fn write_artifact(&mut self, dir: &Path, name: &str, text: &str) -> Result<()> {
        write_text(&dir.join(name), text)?;
        self.artifacts.insert(name.into(), sha256_hex(text.as_bytes()));
        Ok(())
    }

    /// Run `f`, recording its wall time under `phase`.
    pub fn time<T>(&mut self, phase: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        self.timings_ms.insert(phase.into(), start.elapsed().as_secs_f64() * 1e3);
        out
    }

    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serializes");
        s.push('\n');
        s
    }

    pub fn save(&self, dir: &Path) -> Result<()> {
        write_text(&dir.join(MANIFEST_FILE), &self.render())
    }

    pub fn load(path: &Path) -> Result<Manifest> {
        let text = read_text(path)?;
        let value: Value = serde_json::from_str(&text).map_err(|e| PstError::field("pst-manifest", "json", e))?;
        match value.get("version").and_then(Value::as_u64) {
            Some(v) if v > MANIFEST_VERSION as u64 => {
                return Err(PstError::Version { what: "pst-manifest", found: v as u32, supported: MANIFEST_VERSION })
            }
            None => return Err(PstError::field("pst-manifest", "version", "missing")),
            _ => {}
        }
        serde_path_to_error::deserialize(value).map_err(|e| PstError::field("pst-manifest", e.path().to_string(), e.inner()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn save_load_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let mut m = Manifest::new("train");
        m.config = Some(ConfigFile::default());
        m.seed("data", 42);
        m.write_artifact(dir.path(), "a.txt", "hello\n").unwrap();
        m.time("nothing", || ());
        m.result("accuracy", 0.5);
        m.save(dir.path()).unwrap();
        let back = Manifest::load(&dir.path().join(MANIFEST_FILE)).unwrap();
        assert_eq!(back, m);
        assert_eq!(back.artifacts["a.txt"], sha256_hex(b"hello\n"));
        assert_eq!(std::fs::read_to_string(dir.path().join("a.txt")).unwrap(), "hello\n");
    }

    #[test]
    fn newer_version_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join(MANIFEST_FILE);
        std::fs::write(&p, Manifest::new("x").render().replace("\"version\": 1", "\"version\": 2")).unwrap();
        assert!(matches!(Manifest::load(&p), Err(PstError::Version { found: 2, .. })));
    }
}
