//! Hardened circuits: one truth table per neuron, evaluated by lookup.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::{coeffs_of_table, harden_neuron, harden_table, table_of, GateId, Trit};
use crate::network::{argmax, margin, ConnectivityMap, GroupSumConfig, PstNetwork, SoftModel};
use crate::{Error, Result};

/// How output trits are read out into class scores.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LogicKind {
    /// Raw trits are summed; `-1` outputs suppress their class.
    Ternary,
    /// Hardened binary baseline: inputs and outputs are `±1` stand-ins for
    /// bits, scored as `(t + 1) / 2` to match the soft `[0,1]` readout.
    Boolean,
}

impl LogicKind {
    pub fn name(self) -> &'static str {
        match self {
            LogicKind::Ternary => "ternary",
            LogicKind::Boolean => "boolean",
        }
    }

    pub fn from_name(s: &str) -> Option<LogicKind> {
        match s {
            "ternary" => Some(LogicKind::Ternary),
            "boolean" => Some(LogicKind::Boolean),
            _ => None,
        }
    }

    #[inline]
    fn score_value(self, t: i8) -> f64 {
        match self {
            LogicKind::Ternary => t as f64,
            LogicKind::Boolean => (t as f64 + 1.0) / 2.0,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Provenance {
    /// Hash of the checkpoint the circuit was hardened from.
    pub source_hash: String,
    pub hardened_at: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    connectivity: ConnectivityMap,
    gates: Vec<GateId>,
    readout: GroupSumConfig,
    logic: LogicKind,
    pub provenance: Provenance,
    rows: Vec<[i8; 9]>,
}

/// Result of evaluating a circuit on one input.
#[derive(Debug, Clone, PartialEq)]
pub struct CircuitOutput {
    pub outputs: Vec<Trit>,
    pub scores: Vec<f64>,
    pub class: usize,
    pub margin: f64,
}

impl Circuit {
    pub fn new(connectivity: ConnectivityMap, gates: Vec<GateId>, readout: GroupSumConfig, logic: LogicKind) -> Result<Circuit> {
        if gates.len() != connectivity.neuron_count() {
            return Err(Error::shape(alloc::format!(
                "{} gates for {} neurons",
                gates.len(),
                connectivity.neuron_count()
            )));
        }
        readout.check_output_width(*connectivity.widths().last().unwrap())?;
        let rows = gates.iter().map(|g| g.decode().to_i8()).collect();
        Ok(Circuit { connectivity, gates, readout, logic, provenance: Provenance::default(), rows })
    }

    pub fn connectivity(&self) -> &ConnectivityMap {
        &self.connectivity
    }

    pub fn widths(&self) -> &[usize] {
        self.connectivity.widths()
    }

    pub fn input_dim(&self) -> usize {
        self.connectivity.input_dim()
    }

    pub fn gates(&self) -> &[GateId] {
        &self.gates
    }

    pub fn readout(&self) -> &GroupSumConfig {
        &self.readout
    }

    pub fn logic(&self) -> LogicKind {
        self.logic
    }

    pub fn neuron_count(&self) -> usize {
        self.gates.len()
    }

    /// Values of every neuron (layer-major) for one input.
    pub fn neuron_values(&self, x: &[Trit]) -> Result<Vec<Trit>> {
        if x.len() != self.input_dim() {
            return Err(Error::shape(alloc::format!("input length {} != {}", x.len(), self.input_dim())));
        }
        let mut h: Vec<i8> = vec![0; x.len() + self.gates.len()];
        self.eval_into(x, &mut h);
        Ok(h[x.len()..].iter().map(|&v| Trit::from_offset((v + 1) as usize)).collect())
    }

    fn eval_into(&self, x: &[Trit], h: &mut [i8]) {
        let n0 = x.len();
        for (hi, t) in h.iter_mut().zip(x) {
            *hi = t.value();
        }
        let mut prev = 0;
        let mut n = 0;
        for (l, parents) in self.connectivity.layers().enumerate() {
            for p in parents {
                let a = h[prev + p[0] as usize];
                let b = h[prev + p[1] as usize];
                h[n0 + n] = self.rows[n][(3 * (a + 1) + (b + 1)) as usize];
                n += 1;
            }
            prev += self.connectivity.widths()[l];
        }
    }

    pub fn eval_circuit(&self, x: &[Trit]) -> Result<CircuitOutput> {
        let mut buf = Vec::new();
        self.eval_with(x, &mut buf)
    }

    /// `eval_circuit` reusing a caller-owned scratch buffer.
    pub fn eval_with(&self, x: &[Trit], buf: &mut Vec<i8>) -> Result<CircuitOutput> {
        if x.len() != self.input_dim() {
            return Err(Error::shape(alloc::format!("input length {} != {}", x.len(), self.input_dim())));
        }
        buf.clear();
        buf.resize(x.len() + self.gates.len(), 0);
        self.eval_into(x, buf);
        let n_out = *self.widths().last().unwrap();
        let out = &buf[buf.len() - n_out..];
        let values: Vec<f64> = out.iter().map(|&t| self.logic.score_value(t)).collect();
        let scores = self.readout.scores(&values);
        Ok(CircuitOutput {
            outputs: out.iter().map(|&v| Trit::from_offset((v + 1) as usize)).collect(),
            class: argmax(&scores),
            margin: margin(&scores),
            scores,
        })
    }

    /// Network whose coefficients reproduce every gate exactly.
    pub fn to_network(&self) -> Result<PstNetwork> {
        let neurons: Vec<_> = self.gates.iter().map(|g| coeffs_of_table(&g.decode().to_reals())).collect();
        PstNetwork::from_neurons(self.connectivity.clone(), &neurons, self.readout)
    }
}

/// Harden every neuron to its nearest lattice gate.
pub fn harden_network(net: &PstNetwork) -> Circuit {
    let gates = net.neurons().map(|w| harden_neuron(&w)).collect();
    Circuit::new(net.connectivity().clone(), gates, *SoftModel::readout(net), LogicKind::Ternary)
        .expect("network shapes were validated on construction")
}

/// `(1/N) Σ_j (1/9) ‖t_j − round(t_j)‖²`, straight from the rounded tables.
pub fn hardening_error(net: &PstNetwork) -> f64 {
    let n = net.neuron_count();
    let total: f64 = net
        .neurons()
        .map(|w| {
            let t = table_of(&w);
            let r = harden_table(&t).to_reals();
            t.iter().zip(r.iter()).map(|(a, b)| (a - b) * (a - b)).sum::<f64>() / 9.0
        })
        .sum();
    total / n as f64
}

#[derive(Debug, Clone, PartialEq)]
pub struct GapReport {
    /// Fractions in `[0, 1]`.
    pub soft_accuracy: f64,
    pub circuit_accuracy: f64,
    /// `soft − circuit` in percentage points.
    pub gap_pp: f64,
    /// Mean squared hardening distance; absent for the binary baseline.
    pub hardening_error: Option<f64>,
    /// Share of output-neuron values equal to UNKNOWN over all samples.
    pub unknown_fraction: f64,
    pub samples: usize,
    pub soft_correct: usize,
    pub circuit_correct: usize,
}

/// Compare a soft model with its circuit on the same samples: `soft` holds
/// the real-valued encodings, `hard` the trit encodings.
pub fn gap_report<M: SoftModel>(
    model: &M,
    circuit: &Circuit,
    soft: &[Vec<f64>],
    hard: &[Vec<Trit>],
    labels: &[usize],
    hardening_error: Option<f64>,
) -> Result<GapReport> {
    if labels.is_empty() {
        return Err(Error::Empty("dataset"));
    }
    if soft.len() != labels.len() || hard.len() != labels.len() {
        return Err(Error::shape("soft, hard and label counts differ"));
    }
    let mut soft_correct = 0;
    let mut circuit_correct = 0;
    let mut unknown = 0usize;
    let mut buf = Vec::new();
    for ((xs, xh), &y) in soft.iter().zip(hard).zip(labels) {
        if model.predict(xs)? == y {
            soft_correct += 1;
        }
        let out = circuit.eval_with(xh, &mut buf)?;
        if out.class == y {
            circuit_correct += 1;
        }
        unknown += out.outputs.iter().filter(|t| **t == Trit::Unknown).count();
    }
    let n = labels.len() as f64;
    let n_out = *circuit.widths().last().unwrap() as f64;
    let soft_accuracy = soft_correct as f64 / n;
    let circuit_accuracy = circuit_correct as f64 / n;
    Ok(GapReport {
        soft_accuracy,
        circuit_accuracy,
        gap_pp: 100.0 * (soft_accuracy - circuit_accuracy),
        hardening_error,
        unknown_fraction: unknown as f64 / (n * n_out),
        samples: labels.len(),
        soft_correct,
        circuit_correct,
    })
}

/// Accuracy and UNKNOWN output share of a circuit on its own.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircuitScore {
    pub accuracy: f64,
    pub unknown_fraction: f64,
    pub correct: usize,
    pub samples: usize,
}

pub fn score_circuit(circuit: &Circuit, hard: &[Vec<Trit>], labels: &[usize]) -> Result<CircuitScore> {
    if labels.is_empty() {
        return Err(Error::Empty("dataset"));
    }
    if hard.len() != labels.len() {
        return Err(Error::shape("input and label counts differ"));
    }
    let mut correct = 0;
    let mut unknown = 0usize;
    let mut buf = Vec::new();
    for (x, &y) in hard.iter().zip(labels) {
        let out = circuit.eval_with(x, &mut buf)?;
        correct += (out.class == y) as usize;
        unknown += out.outputs.iter().filter(|t| **t == Trit::Unknown).count();
    }
    let n = labels.len();
    let n_out = *circuit.widths().last().unwrap();
    Ok(CircuitScore {
        accuracy: correct as f64 / n as f64,
        unknown_fraction: unknown as f64 / (n * n_out) as f64,
        correct,
        samples: n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{KleeneGate, TruthTable9};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn chain_of(gate: KleeneGate, widths: Vec<usize>) -> Circuit {
        let parents = widths.windows(2).map(|w| (0..w[1]).map(|j| [(j % w[0]) as u32, 0]).collect()).collect();
        let map = ConnectivityMap::from_parts(widths, parents, 0).unwrap();
        let gates = vec![gate.id(); map.neuron_count()];
        Circuit::new(map, gates, GroupSumConfig::new(2, 1.0).unwrap(), LogicKind::Ternary).unwrap()
    }

    fn random_trits(rng: &mut ChaCha8Rng, n: usize) -> Vec<Trit> {
        (0..n).map(|_| Trit::from_offset(rng.random_range(0..3))).collect()
    }

    #[test]
    fn pass_chain_routes_input() {
        let c = chain_of(KleeneGate::PassA, vec![2, 2, 2, 2]);
        let out = c.eval_circuit(&[Trit::True, Trit::False]).unwrap();
        assert_eq!(out.outputs, vec![Trit::True, Trit::False]);
        assert_eq!(out.scores, vec![1.0, -1.0]);
        assert_eq!(out.class, 0);
        assert_eq!(out.margin, 2.0);
    }

    #[test]
    fn unknown_circuit_is_silent() {
        let c = chain_of(KleeneGate::Const(Trit::Unknown), vec![3, 4, 4]);
        let out = c.eval_circuit(&[Trit::True, Trit::False, Trit::Unknown]).unwrap();
        assert!(out.outputs.iter().all(|t| *t == Trit::Unknown));
        assert_eq!(out.scores, vec![0.0, 0.0]);
        assert_eq!((out.class, out.margin), (0, 0.0));
    }

    #[test]
    fn exact_gate_net_matches_circuit_neuron_for_neuron() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let map = ConnectivityMap::generate(&[5, 12, 12, 6], 3).unwrap();
        let gates: Vec<GateId> = (0..map.neuron_count())
            .map(|_| GateId::new(rng.random_range(0..19_683)).unwrap())
            .collect();
        let circuit = Circuit::new(map, gates, GroupSumConfig::new(3, 2.0).unwrap(), LogicKind::Ternary).unwrap();
        let net = circuit.to_network().unwrap();
        assert_eq!(harden_network(&net).gates(), circuit.gates());
        assert_eq!(hardening_error(&net), 0.0);
        for _ in 0..200 {
            let x = random_trits(&mut rng, 5);
            let xs: Vec<f64> = x.iter().map(|t| t.as_f64()).collect();
            let soft = net.forward_soft(&xs).unwrap();
            let hard = circuit.neuron_values(&x).unwrap();
            let flat: Vec<f64> = soft.activations.iter().flatten().copied().collect();
            assert_eq!(flat, hard.iter().map(|t| t.as_f64()).collect::<Vec<_>>());
            let out = circuit.eval_circuit(&x).unwrap();
            assert_eq!(out.scores, soft.scores);
        }
    }

    #[test]
    fn zero_net_hardens_to_unknown() {
        let mut net = PstNetwork::init(4, &[6, 4], GroupSumConfig::new(2, 1.0).unwrap(), 9).unwrap();
        net.coeffs_mut().iter_mut().for_each(|w| *w = 0.0);
        let c = harden_network(&net);
        assert!(c.gates().iter().all(|g| *g == TruthTable9::UNKNOWN.id()));
    }

    #[test]
    fn hardening_error_single_entry() {
        let map = ConnectivityMap::from_parts(vec![2, 2], vec![vec![[0, 1], [0, 1]]], 0).unwrap();
        let eps = 1e-3;
        let mut t = [0.0; 9];
        t[4] = 0.5 - eps;
        let w = coeffs_of_table(&t);
        let net = PstNetwork::from_neurons(map, &[w, crate::PolyCoeffs9::ZERO], GroupSumConfig::new(2, 1.0).unwrap()).unwrap();
        let expected = (0.5 - eps) * (0.5 - eps) / 9.0 / 2.0;
        assert!((hardening_error(&net) - expected).abs() < 1e-15);
    }

    #[test]
    fn gap_report_on_exact_and_unknown_circuits() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let map = ConnectivityMap::generate(&[4, 8, 4], 1).unwrap();
        let gates: Vec<GateId> = (0..12).map(|_| GateId::new(rng.random_range(0..19_683)).unwrap()).collect();
        let circuit = Circuit::new(map.clone(), gates, GroupSumConfig::new(2, 1.0).unwrap(), LogicKind::Ternary).unwrap();
        let net = circuit.to_network().unwrap();
        let hard: Vec<Vec<Trit>> = (0..100).map(|_| random_trits(&mut rng, 4)).collect();
        let soft: Vec<Vec<f64>> = hard.iter().map(|x| x.iter().map(|t| t.as_f64()).collect()).collect();
        let labels: Vec<usize> = (0..100).map(|i| i % 2).collect();
        let r = gap_report(&net, &circuit, &soft, &hard, &labels, Some(hardening_error(&net))).unwrap();
        assert_eq!(r.gap_pp, 0.0);
        assert_eq!(r.hardening_error, Some(0.0));

        let silent = Circuit::new(map, vec![TruthTable9::UNKNOWN.id(); 12], GroupSumConfig::new(2, 1.0).unwrap(), LogicKind::Ternary).unwrap();
        let r = gap_report(&net, &silent, &soft, &hard, &labels, None).unwrap();
        assert_eq!(r.circuit_accuracy, 0.5);
        assert_eq!(r.unknown_fraction, 1.0);
        assert!(gap_report(&net, &silent, &[], &[], &[], None).is_err());

        let scored = score_circuit(&circuit, &hard, &labels).unwrap();
        let r = gap_report(&net, &circuit, &soft, &hard, &labels, None).unwrap();
        assert_eq!((scored.accuracy, scored.unknown_fraction, scored.correct), (r.circuit_accuracy, r.unknown_fraction, r.circuit_correct));
    }

    #[test]
    fn boolean_readout_scores_bits() {
        let mut c = chain_of(KleeneGate::PassA, vec![2, 2]);
        c.logic = LogicKind::Boolean;
        let out = c.eval_circuit(&[Trit::False, Trit::True]).unwrap();
        assert_eq!(out.scores, vec![0.0, 1.0]);
        assert_eq!(out.class, 1);
    }
}
