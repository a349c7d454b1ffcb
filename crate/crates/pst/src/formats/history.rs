//! Training history as JSON lines: a format stamp, then one object per
//! step or evaluation.

use std::path::Path;

use pst_core::training::{EvalRecord, History, StepRecord};
use serde::{Deserialize, Serialize};

use super::{read_text, write_text};
use crate::error::{PstError, Result};

pub const HISTORY_VERSION: u32 = 1;
const WHAT: &str = "pst-history";

#[derive(Serialize, Deserialize)]
struct Stamp {
    format: String,
    version: u32,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum Line {
    Step { step: usize, task_loss: f64, commitment_loss: f64, fourier_loss: f64, lambda: f64, total_loss: f64 },
    Eval { step: usize, soft_accuracy: f64 },
}

pub fn render_history(h: &History) -> String {
    let mut out = serde_json::to_string(&Stamp { format: WHAT.into(), version: HISTORY_VERSION }).expect("stamp serializes");
    out.push('\n');
    let mut evals = h.evals.iter().peekable();
    for s in &h.steps {
        let line = Line::Step {
            step: s.step,
            task_loss: s.task_loss,
            commitment_loss: s.commitment_loss,
            fourier_loss: s.fourier_loss,
            lambda: s.lambda,
            total_loss: s.total_loss,
        };
        out.push_str(&serde_json::to_string(&line).expect("record serializes"));
        out.push('\n');
        while let Some(e) = evals.next_if(|e| e.step <= s.step) {
            out.push_str(&serde_json::to_string(&Line::Eval { step: e.step, soft_accuracy: e.soft_accuracy }).expect("record serializes"));
            out.push('\n');
        }
    }
    for e in evals {
        out.push_str(&serde_json::to_string(&Line::Eval { step: e.step, soft_accuracy: e.soft_accuracy }).expect("record serializes"));
        out.push('\n');
    }
    out
}

pub fn parse_history(text: &str) -> Result<History> {
    let mut lines = text.lines().enumerate();
    let (_, first) = lines.next().ok_or_else(|| PstError::field(WHAT, "format", "empty file"))?;
    let stamp: Stamp = serde_json::from_str(first).map_err(|e| PstError::field(WHAT, "format", e))?;
    if stamp.format != WHAT {
        return Err(PstError::field(WHAT, "format", format!("expected `{WHAT}`, found `{}`", stamp.format)));
    }
    if stamp.version > HISTORY_VERSION {
        return Err(PstError::Version { what: WHAT, found: stamp.version, supported: HISTORY_VERSION });
    }
    let mut h = History::default();
    for (i, line) in lines.filter(|(_, l)| !l.trim().is_empty()) {
        let parsed: Line = serde_json::from_str(line)
            .map_err(|e| PstError::Row { what: WHAT.into(), row: i + 1, column: "*".into(), msg: e.to_string() })?;
        match parsed {
            Line::Step { step, task_loss, commitment_loss, fourier_loss, lambda, total_loss } => {
                h.steps.push(StepRecord { step, task_loss, commitment_loss, fourier_loss, lambda, total_loss })
            }
            Line::Eval { step, soft_accuracy } => h.evals.push(EvalRecord { step, soft_accuracy }),
        }
    }
    Ok(h)
}

pub fn save_history(path: &Path, h: &History) -> Result<()> {
    write_text(path, &render_history(h))
}

pub fn load_history(path: &Path) -> Result<History> {
    parse_history(&read_text(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> History {
        let step = |t: usize| StepRecord {
            step: t,
            task_loss: 1.0 / t as f64,
            commitment_loss: 0.1 / 3.0,
            fourier_loss: 0.0,
            lambda: 0.1 * (t as f64 / 3.0).powi(2),
            total_loss: 1.0 / t as f64 + 0.01,
        };
        History { steps: (1..=3).map(step).collect(), evals: vec![EvalRecord { step: 2, soft_accuracy: 0.75 }, EvalRecord { step: 3, soft_accuracy: 0.8 }] }
    }

    #[test]
    fn round_trip() {
        let h = sample();
        let text = render_history(&h);
        assert_eq!(parse_history(&text).unwrap(), h);
        let kinds: Vec<&str> = text.lines().skip(1).map(|l| if l.contains("\"eval\"") { "e" } else { "s" }).collect();
        assert_eq!(kinds, ["s", "s", "e", "s", "e"]);
    }

    #[test]
    fn rejects_newer_version_and_bad_lines() {
        let text = render_history(&sample()).replacen("\"version\":1", "\"version\":5", 1);
        assert!(matches!(parse_history(&text), Err(PstError::Version { found: 5, .. })));
        let text = render_history(&sample()) + "{\"kind\":\"step\"}\n";
        let err = parse_history(&text).unwrap_err().to_string();
        assert!(err.contains("row 7"), "{err}");
    }
}
