use alloc::vec;
use alloc::vec::Vec;

use rand_distr::{Distribution, StandardNormal};

use super::pst::activation_offsets;
use super::{ConnectivityMap, GroupSumConfig, SoftModel};
use crate::algebra::{kleene_extension, GateId};
use crate::circuit::{Circuit, LogicKind};
use crate::rng::{stream, Stream};
use crate::{Error, Result};

const INPUT_SLACK: f64 = 1e-9;

pub const BOOLEAN_GATE_NAMES: [&str; 16] = [
    "FALSE", "AND", "A_AND_NOT_B", "A", "NOT_A_AND_B", "B", "XOR", "OR", "NOR", "XNOR", "NOT_B",
    "A_OR_NOT_B", "NOT_A", "NOT_A_OR_B", "NAND", "TRUE",
];

/// Outputs of gate `k` at `(a, b) = (0,0), (0,1), (1,0), (1,1)`; the index
/// `k` spells the table in binary, most significant bit first.
pub fn boolean_gate_corners(k: usize) -> [bool; 4] {
    [k & 8 != 0, k & 4 != 0, k & 2 != 0, k & 1 != 0]
}

/// Multilinear coefficients `[c, c_a, c_b, c_ab]` of each gate's
/// probabilistic relaxation on `[0,1]²`.
const RELAXATIONS: [[f64; 4]; 16] = {
    let mut out = [[0.0; 4]; 16];
    let mut k = 0;
    while k < 16 {
        let f00 = ((k >> 3) & 1) as f64;
        let f01 = ((k >> 2) & 1) as f64;
        let f10 = ((k >> 1) & 1) as f64;
        let f11 = (k & 1) as f64;
        out[k] = [f00, f10 - f00, f01 - f00, f11 - f10 - f01 + f00];
        k += 1;
    }
    out
};

/// Values of all 16 relaxed gates at `(a, b)`.
#[inline]
pub fn gate_relaxations(a: f64, b: f64) -> [f64; 16] {
    let ab = a * b;
    let mut g = [0.0; 16];
    for (gk, c) in g.iter_mut().zip(RELAXATIONS.iter()) {
        *gk = c[0] + c[1] * a + c[2] * b + c[3] * ab;
    }
    g
}

/// Partial derivatives of all 16 relaxed gates in `a` and in `b`.
#[inline]
pub(crate) fn gate_relaxation_grads(a: f64, b: f64) -> ([f64; 16], [f64; 16]) {
    let mut da = [0.0; 16];
    let mut db = [0.0; 16];
    for k in 0..16 {
        let c = &RELAXATIONS[k];
        da[k] = c[1] + c[3] * b;
        db[k] = c[2] + c[3] * a;
    }
    (da, db)
}

pub(crate) fn softmax16(logits: &[f64]) -> [f64; 16] {
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut p = [0.0; 16];
    let mut sum = 0.0;
    for (pk, &l) in p.iter_mut().zip(logits) {
        *pk = libm::exp(l - max);
        sum += *pk;
    }
    p.iter_mut().for_each(|pk| *pk /= sum);
    p
}

/// Baseline network: every neuron holds 16 logits over the two-input
/// Boolean gates and outputs the softmax-weighted blend of their relaxations.
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryDlgnNetwork {
    connectivity: ConnectivityMap,
    logits: Vec<f64>,
    readout: GroupSumConfig,
    act_offsets: Vec<usize>,
}

impl BinaryDlgnNetwork {
    pub fn init(input_dim: usize, layer_widths: &[usize], readout: GroupSumConfig, seed: u64) -> Result<BinaryDlgnNetwork> {
        if input_dim < 2 {
            return Err(Error::config(alloc::format!("input dimension must be >= 2, got {input_dim}")));
        }
        if layer_widths.is_empty() {
            return Err(Error::config("no neuron layers"));
        }
        let mut widths = vec![input_dim];
        widths.extend_from_slice(layer_widths);
        let connectivity = ConnectivityMap::generate(&widths, seed)?;
        let mut rng = stream(seed, Stream::Coefficients);
        let logits = (0..16 * connectivity.neuron_count())
            .map(|_| StandardNormal.sample(&mut rng))
            .collect();
        BinaryDlgnNetwork::from_parts(connectivity, logits, readout)
    }

    pub fn from_parts(connectivity: ConnectivityMap, logits: Vec<f64>, readout: GroupSumConfig) -> Result<BinaryDlgnNetwork> {
        let n = connectivity.neuron_count();
        if logits.len() != 16 * n {
            return Err(Error::shape(alloc::format!("{} logits for {n} neurons", logits.len())));
        }
        readout.check_output_width(*connectivity.widths().last().unwrap())?;
        let act_offsets = activation_offsets(connectivity.widths());
        Ok(BinaryDlgnNetwork { connectivity, logits, readout, act_offsets })
    }

    pub fn connectivity(&self) -> &ConnectivityMap {
        &self.connectivity
    }

    pub fn widths(&self) -> &[usize] {
        self.connectivity.widths()
    }

    pub fn neuron_count(&self) -> usize {
        self.connectivity.neuron_count()
    }

    pub fn logits(&self) -> &[f64] {
        &self.logits
    }

    pub fn logits_mut(&mut self) -> &mut [f64] {
        &mut self.logits
    }

    /// Gate distribution of every neuron, 16 entries each.
    pub fn probabilities(&self) -> Vec<f64> {
        self.logits.chunks_exact(16).flat_map(softmax16).collect()
    }

    pub(crate) fn act_offsets(&self) -> &[usize] {
        &self.act_offsets
    }

    pub(crate) fn activation_len(&self) -> usize {
        *self.act_offsets.last().unwrap()
    }

    pub(crate) fn check_input(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.input_dim() {
            return Err(Error::shape(alloc::format!("input length {} != {}", x.len(), self.input_dim())));
        }
        if let Some(v) = x.iter().find(|v| !(**v >= -INPUT_SLACK && **v <= 1.0 + INPUT_SLACK)) {
            return Err(Error::range(alloc::format!("input {v} outside [0, 1]")));
        }
        Ok(())
    }

    /// Forward pass with precomputed gate probabilities; `h` receives the
    /// inputs followed by every neuron output.
    pub(crate) fn forward_into(&self, x: &[f64], probs: &[f64], h: &mut [f64]) {
        let n0 = x.len();
        h[..n0].copy_from_slice(x);
        let mut n = 0;
        for (l, parents) in self.connectivity.layers().enumerate() {
            let prev = self.act_offsets[l];
            for p in parents {
                let a = h[prev + p[0] as usize];
                let b = h[prev + p[1] as usize];
                let g = gate_relaxations(a, b);
                let pk = &probs[16 * n..16 * n + 16];
                h[n0 + n] = pk.iter().zip(g.iter()).map(|(p, g)| p * g).sum();
                n += 1;
            }
        }
    }

    /// Activations of layers `1..=L` and class scores.
    pub fn forward_binary(&self, x: &[f64]) -> Result<(Vec<Vec<f64>>, Vec<f64>)> {
        self.check_input(x)?;
        let probs = self.probabilities();
        let mut h = vec![0.0; self.activation_len()];
        self.forward_into(x, &probs, &mut h);
        let acts: Vec<Vec<f64>> = self.act_offsets.windows(2).skip(1).map(|w| h[w[0]..w[1]].to_vec()).collect();
        let scores = self.readout.scores(acts.last().unwrap());
        Ok((acts, scores))
    }

    /// Index of the most probable gate per neuron; ties go to the lowest index.
    pub fn selected_gates(&self) -> Vec<usize> {
        self.logits
            .chunks_exact(16)
            .map(|l| {
                let mut best = 0;
                for k in 1..16 {
                    if l[k] > l[best] {
                        best = k;
                    }
                }
                best
            })
            .collect()
    }

    /// Mode-gate circuit. Each Boolean gate is embedded in the ternary
    /// lattice by its strong Kleene extension.
    pub fn harden_binary(&self) -> Result<Circuit> {
        let gates: Vec<GateId> = self
            .selected_gates()
            .into_iter()
            .map(|k| kleene_extension(boolean_gate_corners(k)).id())
            .collect();
        Circuit::new(self.connectivity.clone(), gates, self.readout, LogicKind::Boolean)
    }
}

impl SoftModel for BinaryDlgnNetwork {
    fn readout(&self) -> &GroupSumConfig {
        &self.readout
    }

    fn input_dim(&self) -> usize {
        self.connectivity.input_dim()
    }

    fn class_scores(&self, x: &[f64]) -> Result<Vec<f64>> {
        Ok(self.forward_binary(x)?.1)
    }
}
