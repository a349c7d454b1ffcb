use alloc::vec;
use alloc::vec::Vec;

use rand_distr::{Distribution, Normal};

use super::{ConnectivityMap, GroupSumConfig, SoftModel};
use crate::algebra::{eval_poly, PolyCoeffs9};
use crate::rng::{stream, Stream};
use crate::{Error, Result};

/// Standard deviation of the i.i.d. Gaussian coefficient initialisation.
pub const INIT_STD: f64 = 0.45;

const INPUT_SLACK: f64 = 1e-9;

#[inline]
pub fn clip(x: f64) -> f64 {
    x.clamp(-1.0, 1.0)
}

/// Layered network of polynomial neurons.
///
/// Coefficients are stored flat, nine per neuron, layer after layer. The
/// activation buffer used by the forward pass holds the inputs followed by
/// every neuron in the same order.
#[derive(Debug, Clone, PartialEq)]
pub struct PstNetwork {
    connectivity: ConnectivityMap,
    coeffs: Vec<f64>,
    readout: GroupSumConfig,
    act_offsets: Vec<usize>,
}

/// Result of a soft forward pass on one sample.
#[derive(Debug, Clone, PartialEq)]
pub struct SoftForward {
    /// Activations of layers `1..=L`.
    pub activations: Vec<Vec<f64>>,
    pub scores: Vec<f64>,
}

impl PstNetwork {
    /// Random network: `layer_widths` are `n1..nL`; the last must divide by `k`.
    pub fn init(input_dim: usize, layer_widths: &[usize], readout: GroupSumConfig, seed: u64) -> Result<PstNetwork> {
        if input_dim < 2 {
            return Err(Error::config(alloc::format!("input dimension must be >= 2, got {input_dim}")));
        }
        if layer_widths.is_empty() {
            return Err(Error::config("no neuron layers"));
        }
        let mut widths = vec![input_dim];
        widths.extend_from_slice(layer_widths);
        let connectivity = ConnectivityMap::generate(&widths, seed)?;
        let normal = Normal::new(0.0, INIT_STD).expect("valid normal");
        let mut rng = stream(seed, Stream::Coefficients);
        let coeffs = (0..9 * connectivity.neuron_count()).map(|_| normal.sample(&mut rng)).collect();
        PstNetwork::from_parts(connectivity, coeffs, readout)
    }

    pub fn from_parts(connectivity: ConnectivityMap, coeffs: Vec<f64>, readout: GroupSumConfig) -> Result<PstNetwork> {
        let n = connectivity.neuron_count();
        if coeffs.len() != 9 * n {
            return Err(Error::shape(alloc::format!("{} coefficients for {n} neurons", coeffs.len())));
        }
        readout.check_output_width(*connectivity.widths().last().unwrap())?;
        let act_offsets = activation_offsets(connectivity.widths());
        Ok(PstNetwork { connectivity, coeffs, readout, act_offsets })
    }

    /// Network whose neurons are given per layer as polynomial coefficients.
    pub fn from_neurons(connectivity: ConnectivityMap, neurons: &[PolyCoeffs9], readout: GroupSumConfig) -> Result<PstNetwork> {
        let coeffs = neurons.iter().flat_map(|w| w.0).collect();
        PstNetwork::from_parts(connectivity, coeffs, readout)
    }

    pub fn connectivity(&self) -> &ConnectivityMap {
        &self.connectivity
    }

    pub fn widths(&self) -> &[usize] {
        self.connectivity.widths()
    }

    pub fn depth(&self) -> usize {
        self.connectivity.depth()
    }

    pub fn neuron_count(&self) -> usize {
        self.connectivity.neuron_count()
    }

    pub fn output_width(&self) -> usize {
        *self.widths().last().unwrap()
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [f64] {
        &mut self.coeffs
    }

    /// Coefficients of neuron `n` in global (layer-major) order.
    #[inline]
    pub fn neuron(&self, n: usize) -> PolyCoeffs9 {
        let mut w = [0.0; 9];
        w.copy_from_slice(&self.coeffs[9 * n..9 * n + 9]);
        PolyCoeffs9(w)
    }

    pub fn neurons(&self) -> impl Iterator<Item = PolyCoeffs9> + '_ {
        self.coeffs.chunks_exact(9).map(|c| {
            let mut w = [0.0; 9];
            w.copy_from_slice(c);
            PolyCoeffs9(w)
        })
    }

    pub fn set_neuron(&mut self, n: usize, w: &PolyCoeffs9) {
        self.coeffs[9 * n..9 * n + 9].copy_from_slice(&w.0);
    }

    /// Offset of layer `l` (0 = inputs) within the activation buffer.
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
        if let Some(v) = x.iter().find(|v| !(v.abs() <= 1.0 + INPUT_SLACK)) {
            return Err(Error::range(alloc::format!("input {v} outside [-1, 1]")));
        }
        Ok(())
    }

    /// Forward pass into caller buffers: `h` receives inputs then all neuron
    /// activations, `z` the pre-clip polynomial values of every neuron.
    pub(crate) fn forward_into(&self, x: &[f64], z: &mut [f64], h: &mut [f64]) {
        let n0 = x.len();
        h[..n0].copy_from_slice(x);
        let mut n = 0;
        for (l, parents) in self.connectivity.layers().enumerate() {
            let prev = self.act_offsets[l];
            for p in parents {
                let a = h[prev + p[0] as usize];
                let b = h[prev + p[1] as usize];
                let w = &self.coeffs[9 * n..9 * n + 9];
                let v = eval_poly(&PolyCoeffs9(w.try_into().unwrap()), a, b);
                z[n] = v;
                h[n0 + n] = clip(v);
                n += 1;
            }
        }
    }

    /// Unclipped polynomial value of every neuron (layer-major).
    pub fn pre_activations(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_input(x)?;
        let mut z = vec![0.0; self.neuron_count()];
        let mut h = vec![0.0; self.activation_len()];
        self.forward_into(x, &mut z, &mut h);
        Ok(z)
    }

    pub fn forward_soft(&self, x: &[f64]) -> Result<SoftForward> {
        self.check_input(x)?;
        let n = self.neuron_count();
        let mut z = vec![0.0; n];
        let mut h = vec![0.0; self.activation_len()];
        self.forward_into(x, &mut z, &mut h);
        let activations: Vec<Vec<f64>> = self
            .act_offsets
            .windows(2)
            .skip(1)
            .map(|w| h[w[0]..w[1]].to_vec())
            .collect();
        let scores = self.readout.scores(activations.last().unwrap());
        Ok(SoftForward { activations, scores })
    }
}

impl SoftModel for PstNetwork {
    fn readout(&self) -> &GroupSumConfig {
        &self.readout
    }

    fn input_dim(&self) -> usize {
        self.connectivity.input_dim()
    }

    fn class_scores(&self, x: &[f64]) -> Result<Vec<f64>> {
        Ok(self.forward_soft(x)?.scores)
    }
}

pub(crate) fn activation_offsets(widths: &[usize]) -> Vec<usize> {
    let mut offsets = Vec::with_capacity(widths.len() + 1);
    let mut acc = 0;
    offsets.push(0);
    for w in widths {
        acc += w;
        offsets.push(acc);
    }
    offsets
}
