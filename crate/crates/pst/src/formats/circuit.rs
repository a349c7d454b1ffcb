//! Hardened circuits: one gate per body row, given both as its id and as
//! its nine-entry table over the grid (`-`, `0`, `+`).

use std::path::Path;

use pst_core::circuit::Provenance;
use pst_core::data::Encoder;
use pst_core::{Circuit, ConnectivityMap, GateId, GroupSumConfig, LogicKind, Trit};
use serde::{Deserialize, Serialize};

use super::checkpoint::{read_neuron_rows, EncoderSpec};
use super::{parse_document, read_text, render_document, write_text};
use crate::error::{PstError, Result};

pub const CIRCUIT_VERSION: u32 = 1;
const WHAT: &str = "pst-circuit";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct CircuitHeader {
    format: String,
    version: u32,
    logic: String,
    widths: Vec<usize>,
    k: usize,
    tau: f64,
    connectivity_seed: u64,
    source_hash: String,
    hardened_at: String,
    encoder: Option<EncoderSpec>,
}

/// A circuit with the encoder that feeds it, when known.
#[derive(Debug, Clone, PartialEq)]
pub struct CircuitFile {
    pub circuit: Circuit,
    pub encoder: Option<Encoder>,
}

pub fn table_string(g: GateId) -> String {
    g.decode()
        .entries()
        .iter()
        .map(|t| match t {
            Trit::False => '-',
            Trit::Unknown => '0',
            Trit::True => '+',
        })
        .collect()
}

fn columns() -> Vec<String> {
    ["layer", "index", "s", "t", "gate", "table"].iter().map(|s| s.to_string()).collect()
}

pub fn render_circuit(cf: &CircuitFile) -> Result<String> {
    let c = &cf.circuit;
    let conn = c.connectivity();
    let header = CircuitHeader {
        format: WHAT.into(),
        version: CIRCUIT_VERSION,
        logic: c.logic().name().into(),
        widths: conn.widths().to_vec(),
        k: c.readout().k,
        tau: c.readout().tau,
        connectivity_seed: conn.seed(),
        source_hash: c.provenance.source_hash.clone(),
        hardened_at: c.provenance.hardened_at.clone(),
        encoder: cf.encoder.as_ref().map(EncoderSpec::from_encoder),
    };
    let mut body = columns().join(",");
    body.push('\n');
    let mut n = 0;
    for (l, layer) in conn.layers().enumerate() {
        for (j, [s, t]) in layer.iter().enumerate() {
            let g = c.gates()[n];
            body.push_str(&format!("{},{j},{s},{t},{},{}\n", l + 1, g.get(), table_string(g)));
            n += 1;
        }
    }
    render_document(&header, &body)
}

pub fn parse_circuit(text: &str) -> Result<CircuitFile> {
    let (h, body, first_line): (CircuitHeader, _, _) = parse_document(WHAT, CIRCUIT_VERSION, text)?;
    let logic = LogicKind::from_name(&h.logic).ok_or_else(|| PstError::field(WHAT, "logic", format!("unknown logic `{}`", h.logic)))?;
    let readout = GroupSumConfig::new(h.k, h.tau).map_err(|e| PstError::field(WHAT, "k", e))?;
    let mut gates = Vec::new();
    let parents = read_neuron_rows(WHAT, body, first_line, &h.widths, &columns(), |reader, line, rec| {
        let id: u32 = reader.cell(line, rec, 4)?;
        let g = GateId::new(id).map_err(|e| reader.error(line, 4, e.to_string()))?;
        if rec.get(5) != Some(table_string(g).as_str()) {
            return Err(reader.error(line, 5, format!("does not match gate {id} ({})", table_string(g))));
        }
        gates.push(g);
        Ok(())
    })?;
    let conn = ConnectivityMap::from_parts(h.widths.clone(), parents, h.connectivity_seed)
        .map_err(|e| PstError::field(WHAT, "widths", e))?;
    let mut circuit = Circuit::new(conn, gates, readout, logic).map_err(|e| PstError::field(WHAT, "k", e))?;
    circuit.provenance = Provenance { source_hash: h.source_hash, hardened_at: h.hardened_at };
    let encoder = h.encoder.as_ref().map(|e| e.to_encoder(WHAT)).transpose()?;
    if let Some(enc) = &encoder {
        if enc.output_dim() != h.widths[0] {
            return Err(PstError::field(WHAT, "encoder", format!("encodes {} inputs, circuit takes {}", enc.output_dim(), h.widths[0])));
        }
    }
    Ok(CircuitFile { circuit, encoder })
}

pub fn save_circuit(path: &Path, cf: &CircuitFile) -> Result<()> {
    write_text(path, &render_circuit(cf)?)
}

pub fn load_circuit(path: &Path) -> Result<CircuitFile> {
    parse_circuit(&read_text(path)?)
}
