//! Tab-separated report tables with `#` comment lines for the format stamp
//! and definitions.

use std::path::Path;

use pst_core::analysis::{CoverageCurve, DeltaRow, DiversityReport, ResolutionRow, SeparationRow, SpectralProfile};
use pst_core::GapReport;

use super::write_text;
use crate::error::Result;

pub const REPORT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub notes: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Table {
        Table { name: name.into(), notes: Vec::new(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn note(mut self, note: impl Into<String>) -> Table {
        self.notes.push(note.into());
        self
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut out = format!("# pst-report version={REPORT_VERSION} table={}\n", self.name);
        for n in &self.notes {
            out.push_str(&format!("# {n}\n"));
        }
        out.push_str(&self.columns.join("\t"));
        out.push('\n');
        for r in &self.rows {
            out.push_str(&r.join("\t"));
            out.push('\n');
        }
        out
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        write_text(path, &self.render())
    }

    /// Value of `column` in row `row`, for tests and summaries.
    pub fn get(&self, row: usize, column: &str) -> Option<&str> {
        let c = self.columns.iter().position(|x| x == column)?;
        self.rows.get(row).map(|r| r[c].as_str())
    }
}

fn pct(x: f64) -> String {
    format!("{:.2}", 100.0 * x)
}

fn err_cell(e: &pst_core::Error) -> String {
    format!("error: {e}").replace('\t', " ")
}

pub fn gap_table(g: &GapReport) -> Table {
    let mut t = Table::new("gap", &["samples", "soft_acc", "circuit_acc", "gap_pp", "unk_pct", "hardening_error"])
        .note("gap_pp = soft accuracy - circuit accuracy, in percentage points");
    t.push(vec![
        g.samples.to_string(),
        pct(g.soft_accuracy),
        pct(g.circuit_accuracy),
        format!("{:.2}", g.gap_pp),
        pct(g.unknown_fraction),
        g.hardening_error.map_or("-".into(), |h| format!("{h:.6e}")),
    ]);
    t
}

pub fn selective_table(c: &CoverageCurve) -> Table {
    let mut t = Table::new("selective", &["coverage_pct", "retained", "accuracy_pct"])
        .note("samples ranked by margin (top score - runner-up), stable on ties; coverage r keeps ceil(r n)")
        .note(format!("AUC = -mean accuracy over the coverage grid = {:.4}", -c.auc));
    for p in &c.points {
        t.push(vec![pct(p.coverage), p.retained.to_string(), pct(p.accuracy)]);
    }
    t
}

pub fn diversity_table(d: &DiversityReport) -> Table {
    let mut t = Table::new("diversity", &["neurons", "unique", "eff_div", "gini", "redundancy_pct", "max_copies", "singletons"])
        .note("eff_div = exp(Shannon entropy of gate usage, nats); gini over the full gate vocabulary");
    t.push(vec![
        d.neurons.to_string(),
        d.unique.to_string(),
        format!("{:.1}", d.effective_diversity),
        format!("{:.3}", d.gini),
        pct(d.redundancy),
        d.max_copies.to_string(),
        d.singletons.to_string(),
    ]);
    t
}

pub fn spectral_table(p: &SpectralProfile) -> Table {
    let mut t = Table::new("spectral", &["unique", "ternary_pct", "const_pct", "linear_pct", "quad_pct", "cubic_pct", "quartic_pct"])
        .note("band shares of Fourier energy pooled over unique gates; band = total degree of the basis term")
        .note("ternary = gate table contains at least one UNKNOWN");
    if p.bands.zero_energy {
        t.notes.push("all gates carry zero energy".into());
    }
    let b = p.bands.as_array();
    t.push(vec![
        p.unique_gates.to_string(),
        pct(p.ternary_fraction),
        pct(b[0]),
        pct(b[1]),
        pct(b[2]),
        pct(b[3]),
        pct(b[4]),
    ]);
    t
}

pub fn spectral_gates_table(p: &SpectralProfile) -> Table {
    let mut t = Table::new("spectral_gates", &["gate_id", "class", "l1", "const", "linear", "quad", "cubic", "quartic"]);
    for (g, class, l1, bands) in &p.gates {
        let mut row = vec![g.get().to_string(), class.name().to_string(), format!("{l1:.6}")];
        row.extend(bands.as_array().iter().map(|e| format!("{e:.6}")));
        t.push(row);
    }
    t
}

pub fn separation_table(rows: &[SeparationRow]) -> Table {
    let mut t = Table::new("separation", &["sep_sigma", "tern_acc", "unk_pct", "bin_acc", "bayes"])
        .note("bayes = Phi(sep/2): unit-variance Gaussians with means sep apart");
    for r in rows {
        let (acc, unk) = match &r.ternary {
            Ok((a, u)) => (pct(*a), pct(*u)),
            Err(e) => (err_cell(e), "-".into()),
        };
        let bin = match &r.binary {
            None => "-".into(),
            Some(Ok(a)) => pct(*a),
            Some(Err(e)) => err_cell(e),
        };
        t.push(vec![format!("{}", r.sep), acc, unk, bin, pct(r.bayes)]);
    }
    t
}

pub fn delta_table(rows: &[DeltaRow]) -> Table {
    let mut t = Table::new("delta", &["delta", "seed", "acc", "unk_pct", "gap_pp", "input_unk_pct"]);
    for r in rows {
        let cells = match &r.result {
            Ok((a, u, g, i)) => vec![pct(*a), pct(*u), format!("{g:.2}"), pct(*i)],
            Err(e) => vec![err_cell(e), "-".into(), "-".into(), "-".into()],
        };
        let mut row = vec![format!("{}", r.delta), r.seed.to_string()];
        row.extend(cells);
        t.push(row);
    }
    t
}

pub fn resolution_table(rows: &[ResolutionRow]) -> Table {
    let mut t = Table::new("resolution", &["K", "input_dim", "body_widths", "acc", "unk_pct", "input_unk_pct"])
        .note("K = bins per feature; the encoder uses K - 1 thresholds");
    for r in rows {
        let w = r.body.first().copied().unwrap_or(0);
        let widths = if r.body.iter().all(|&x| x == w) {
            format!("[{w}]^{}", r.body.len())
        } else {
            format!("{:?}", r.body)
        };
        let cells = match &r.result {
            Ok((a, u, i)) => vec![pct(*a), pct(*u), pct(*i)],
            Err(e) => vec![err_cell(e), "-".into(), "-".into()],
        };
        let mut row = vec![r.resolution.to_string(), r.input_dim.to_string(), widths];
        row.extend(cells);
        t.push(row);
    }
    t
}
