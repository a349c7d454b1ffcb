//! Trained-network checkpoints: topology, readout and encoder in the header,
//! one neuron per body row with its parents and parameters.

use std::path::Path;

use pst_core::data::{Encoder, EncoderConfig, EncodingMode, ThresholdPlacement};
use pst_core::experiment::{Arch, TrainedModel};
use pst_core::network::SoftModel;
use pst_core::{BinaryDlgnNetwork, ConnectivityMap, GroupSumConfig, PstNetwork};
use serde::{Deserialize, Serialize};

use super::{fmt_f64, parse_document, read_text, render_document, write_text, Body};
use crate::error::{PstError, Result};

pub const CHECKPOINT_VERSION: u32 = 1;
const WHAT: &str = "pst-checkpoint";

/// Encoder state as stored in checkpoint and circuit headers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EncoderSpec {
    pub mode: String,
    pub placement: String,
    pub thresholds: usize,
    pub delta: f64,
    /// Per feature `[lo, hi]` from the training split.
    pub ranges: Vec<[f64; 2]>,
    pub cuts: Vec<Vec<f64>>,
}

impl EncoderSpec {
    pub fn from_encoder(enc: &Encoder) -> EncoderSpec {
        let cfg = enc.config();
        EncoderSpec {
            mode: cfg.mode.name().to_string(),
            placement: cfg.placement.name().to_string(),
            thresholds: cfg.thresholds,
            delta: cfg.delta,
            ranges: enc.ranges().iter().map(|&(lo, hi)| [lo, hi]).collect(),
            cuts: enc.thresholds().to_vec(),
        }
    }

    pub fn to_encoder(&self, what: &'static str) -> Result<Encoder> {
        let mode = EncodingMode::from_name(&self.mode)
            .ok_or_else(|| PstError::field(what, "encoder.mode", format!("unknown mode `{}`", self.mode)))?;
        let placement = ThresholdPlacement::from_name(&self.placement)
            .ok_or_else(|| PstError::field(what, "encoder.placement", format!("unknown placement `{}`", self.placement)))?;
        let cfg = EncoderConfig { thresholds: self.thresholds, delta: self.delta, mode, placement };
        let ranges = self.ranges.iter().map(|r| (r[0], r[1])).collect();
        Encoder::from_parts(cfg, ranges, self.cuts.clone()).map_err(|e| PstError::field(what, "encoder", e))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct CheckpointHeader {
    format: String,
    version: u32,
    arch: String,
    /// Input dimension followed by the layer widths.
    widths: Vec<usize>,
    k: usize,
    tau: f64,
    connectivity_seed: u64,
    steps_trained: usize,
    encoder: Option<EncoderSpec>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Checkpoint {
    pub model: TrainedModel,
    pub encoder: Option<Encoder>,
    pub steps_trained: usize,
}

impl Checkpoint {
    pub fn arch(&self) -> Arch {
        self.model.arch()
    }

    fn parts(&self) -> (&ConnectivityMap, &GroupSumConfig, &[f64], usize) {
        match &self.model {
            TrainedModel::Ternary(n) => (n.connectivity(), n.readout(), n.coeffs(), 9),
            TrainedModel::Binary(n) => (n.connectivity(), n.readout(), n.logits(), 16),
        }
    }
}

fn param_columns(arch: Arch) -> Vec<String> {
    let (prefix, n) = match arch {
        Arch::Ternary => ("w", 9),
        Arch::Binary => ("logit", 16),
    };
    let mut cols: Vec<String> = ["layer", "index", "s", "t"].iter().map(|s| s.to_string()).collect();
    cols.extend((0..n).map(|i| format!("{prefix}{i}")));
    cols
}

pub fn render_checkpoint(ck: &Checkpoint) -> Result<String> {
    let (conn, readout, params, per) = ck.parts();
    let header = CheckpointHeader {
        format: WHAT.into(),
        version: CHECKPOINT_VERSION,
        arch: ck.arch().name().into(),
        widths: conn.widths().to_vec(),
        k: readout.k,
        tau: readout.tau,
        connectivity_seed: conn.seed(),
        steps_trained: ck.steps_trained,
        encoder: ck.encoder.as_ref().map(EncoderSpec::from_encoder),
    };
    let mut body = param_columns(ck.arch()).join(",");
    body.push('\n');
    let mut n = 0;
    for (l, layer) in conn.layers().enumerate() {
        for (j, [s, t]) in layer.iter().enumerate() {
            body.push_str(&format!("{},{j},{s},{t}", l + 1));
            for p in &params[per * n..per * (n + 1)] {
                body.push(',');
                body.push_str(&fmt_f64(*p));
            }
            body.push('\n');
            n += 1;
        }
    }
    render_document(&header, &body)
}

/// Neuron rows in layer-major order, checked against the header widths.
pub(crate) fn read_neuron_rows(
    what: &'static str,
    body: &str,
    first_line: usize,
    widths: &[usize],
    columns: &[String],
    mut per_row: impl FnMut(&Body<'_>, usize, &csv::StringRecord) -> Result<()>,
) -> Result<Vec<Vec<[u32; 2]>>> {
    if widths.len() < 2 {
        return Err(PstError::field(what, "widths", "need an input width and at least one layer"));
    }
    let mut reader = Body::new(what, body, first_line, Some(columns))?;
    let mut parents: Vec<Vec<[u32; 2]>> = widths[1..].iter().map(|&w| Vec::with_capacity(w)).collect();
    let total: usize = widths[1..].iter().sum();
    let mut seen = 0usize;
    while let Some((line, rec)) = reader.next_row()? {
        if seen == total {
            return Err(reader.error(line, 0, format!("more than the {total} neurons declared by `widths`")));
        }
        let layer: usize = reader.cell(line, &rec, 0)?;
        let index: usize = reader.cell(line, &rec, 1)?;
        // `seen < total`, so some layer is still short.
        let expected_layer = 1 + (0..parents.len()).find(|&i| parents[i].len() < widths[i + 1]).unwrap_or(0);
        if layer != expected_layer {
            return Err(reader.error(line, 0, format!("expected layer {expected_layer}")));
        }
        let expected_index = parents[layer - 1].len();
        if index != expected_index {
            return Err(reader.error(line, 1, format!("expected index {expected_index}")));
        }
        let s: u32 = reader.cell(line, &rec, 2)?;
        let t: u32 = reader.cell(line, &rec, 3)?;
        for (col, p) in [(2, s), (3, t)] {
            if p as usize >= widths[layer - 1] {
                return Err(reader.error(line, col, format!("parent {p} out of range for width {}", widths[layer - 1])));
            }
        }
        per_row(&reader, line, &rec)?;
        parents[layer - 1].push([s, t]);
        seen += 1;
    }
    if seen != total {
        return Err(PstError::field(what, "widths", format!("declares {total} neurons but the body has {seen}")));
    }
    Ok(parents)
}

pub fn parse_checkpoint(text: &str) -> Result<Checkpoint> {
    let (h, body, first_line): (CheckpointHeader, _, _) = parse_document(WHAT, CHECKPOINT_VERSION, text)?;
    let arch = Arch::from_name(&h.arch).ok_or_else(|| PstError::field(WHAT, "arch", format!("unknown arch `{}`", h.arch)))?;
    let readout = GroupSumConfig::new(h.k, h.tau).map_err(|e| PstError::field(WHAT, "k", e))?;
    let cols = param_columns(arch);
    let per = cols.len() - 4;
    let mut params = Vec::new();
    let parents = read_neuron_rows(WHAT, body, first_line, &h.widths, &cols, |reader, line, rec| {
        for c in 4..4 + per {
            let v: f64 = reader.cell(line, rec, c)?;
            if !v.is_finite() {
                return Err(reader.error(line, c, "non-finite parameter"));
            }
            params.push(v);
        }
        Ok(())
    })?;
    let conn = ConnectivityMap::from_parts(h.widths.clone(), parents, h.connectivity_seed)
        .map_err(|e| PstError::field(WHAT, "widths", e))?;
    let model = match arch {
        Arch::Ternary => TrainedModel::Ternary(PstNetwork::from_parts(conn, params, readout).map_err(|e| PstError::field(WHAT, "k", e))?),
        Arch::Binary => {
            TrainedModel::Binary(BinaryDlgnNetwork::from_parts(conn, params, readout).map_err(|e| PstError::field(WHAT, "k", e))?)
        }
    };
    let encoder = h.encoder.as_ref().map(|e| e.to_encoder(WHAT)).transpose()?;
    if let Some(enc) = &encoder {
        if enc.output_dim() != h.widths[0] {
            return Err(PstError::field(
                WHAT,
                "encoder",
                format!("encodes {} inputs but the network takes {}", enc.output_dim(), h.widths[0]),
            ));
        }
    }
    Ok(Checkpoint { model, encoder, steps_trained: h.steps_trained })
}

pub fn save_checkpoint(path: &Path, ck: &Checkpoint) -> Result<()> {
    write_text(path, &render_checkpoint(ck)?)
}

pub fn load_checkpoint(path: &Path) -> Result<Checkpoint> {
    parse_checkpoint(&read_text(path)?)
}
