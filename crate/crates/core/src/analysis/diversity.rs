use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::algebra::{GateId, GATE_COUNT};
use crate::circuit::{Circuit, LogicKind};
use crate::fourier::{fourier_transform, is_binary_equivalent, raw_band_energies, spectral_class, BandEnergies, SpectralClass, EXACT_TOL};

#[derive(Debug, Clone, PartialEq)]
pub struct DiversityReport {
    pub neurons: usize,
    pub unique: usize,
    /// `exp` of the Shannon entropy (nats) of gate usage.
    pub effective_diversity: f64,
    /// Gini coefficient of the usage counts over the whole gate vocabulary.
    pub gini: f64,
    /// `1 − unique / neurons`.
    pub redundancy: f64,
    pub max_copies: usize,
    pub singletons: usize,
}

fn gate_counts(gates: &[GateId]) -> BTreeMap<GateId, usize> {
    let mut counts = BTreeMap::new();
    for g in gates {
        *counts.entry(*g).or_insert(0) += 1;
    }
    counts
}

/// Half the relative mean absolute difference of `counts`, padded with zeros
/// up to `vocabulary` entries.
pub fn gini(counts: &[usize], vocabulary: usize) -> f64 {
    let total: usize = counts.iter().sum();
    if total == 0 || vocabulary < 2 {
        return 0.0;
    }
    let mut sorted: Vec<usize> = counts.iter().copied().filter(|&c| c > 0).collect();
    sorted.sort_unstable();
    let v = vocabulary.max(sorted.len());
    let offset = v - sorted.len();
    // G = 2 Σ i c_(i) / (V Σ c) − (V + 1) / V with ascending 1-based ranks.
    let weighted: f64 = sorted.iter().enumerate().map(|(i, &c)| (offset + i + 1) as f64 * c as f64).sum();
    2.0 * weighted / (v as f64 * total as f64) - (v as f64 + 1.0) / v as f64
}

pub fn diversity_report(circuit: &Circuit) -> DiversityReport {
    let counts = gate_counts(circuit.gates());
    let neurons = circuit.neuron_count();
    let values: Vec<usize> = counts.values().copied().collect();
    let entropy: f64 = values
        .iter()
        .map(|&c| {
            let p = c as f64 / neurons as f64;
            -p * libm::log(p)
        })
        .sum();
    let vocabulary = match circuit.logic() {
        LogicKind::Ternary => GATE_COUNT as usize,
        LogicKind::Boolean => 16,
    };
    DiversityReport {
        neurons,
        unique: counts.len(),
        effective_diversity: libm::exp(entropy),
        gini: gini(&values, vocabulary),
        redundancy: 1.0 - counts.len() as f64 / neurons as f64,
        max_copies: values.iter().copied().max().unwrap_or(0),
        singletons: values.iter().filter(|&&c| c == 1).count(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralProfile {
    /// Band shares of the energy pooled over unique gates.
    pub bands: BandEnergies,
    pub unique_gates: usize,
    /// Share of unique gates that can emit UNKNOWN.
    pub ternary_fraction: f64,
    pub class_counts: BTreeMap<SpectralClass, usize>,
    /// Per unique gate: id, class, Fourier L1 and band shares.
    pub gates: Vec<(GateId, SpectralClass, f64, BandEnergies)>,
}

pub fn spectral_profile(circuit: &Circuit) -> SpectralProfile {
    let counts = gate_counts(circuit.gates());
    let mut raw = [0.0; 5];
    let mut ternary = 0usize;
    let mut class_counts = BTreeMap::new();
    let mut gates = Vec::with_capacity(counts.len());
    for &g in counts.keys() {
        let table = g.decode();
        let fhat = fourier_transform(&table.to_reals());
        let r = raw_band_energies(&fhat);
        for (acc, e) in raw.iter_mut().zip(r) {
            *acc += e;
        }
        if !is_binary_equivalent(&table) {
            ternary += 1;
        }
        let class = spectral_class(&fhat, EXACT_TOL);
        *class_counts.entry(class).or_insert(0) += 1;
        gates.push((g, class, fhat.l1(), BandEnergies::from_raw(r)));
    }
    SpectralProfile {
        bands: BandEnergies::from_raw(raw),
        unique_gates: counts.len(),
        ternary_fraction: ternary as f64 / counts.len().max(1) as f64,
        class_counts,
        gates,
    }
}
