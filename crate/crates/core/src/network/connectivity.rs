use alloc::vec::Vec;

use rand::Rng;

use crate::rng::{stream, Stream};
use crate::{Error, Result};

/// Two parents per neuron, drawn uniformly with replacement from the
/// previous layer (the first layer draws from the encoded input). A neuron
/// may receive the same parent twice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectivityMap {
    seed: u64,
    /// `n0, n1, ..., nL` with `n0` the input dimension.
    widths: Vec<usize>,
    /// `parents[l - 1][j]` for layer `l >= 1`, indices into layer `l - 1`.
    parents: Vec<Vec<[u32; 2]>>,
}

impl ConnectivityMap {
    pub fn generate(widths: &[usize], seed: u64) -> Result<ConnectivityMap> {
        validate_widths(widths)?;
        let mut rng = stream(seed, Stream::Connectivity);
        let parents = widths
            .windows(2)
            .map(|w| {
                let prev = w[0] as u32;
                (0..w[1]).map(|_| [rng.random_range(0..prev), rng.random_range(0..prev)]).collect()
            })
            .collect();
        Ok(ConnectivityMap { seed, widths: widths.to_vec(), parents })
    }

    /// Rebuild from stored parents, checking every index.
    pub fn from_parts(widths: Vec<usize>, parents: Vec<Vec<[u32; 2]>>, seed: u64) -> Result<ConnectivityMap> {
        validate_widths(&widths)?;
        if parents.len() != widths.len() - 1 {
            return Err(Error::shape(alloc::format!(
                "{} parent layers for {} neuron layers",
                parents.len(),
                widths.len() - 1
            )));
        }
        for (l, layer) in parents.iter().enumerate() {
            if layer.len() != widths[l + 1] {
                return Err(Error::shape(alloc::format!(
                    "layer {} has {} parent rows, expected {}",
                    l + 1,
                    layer.len(),
                    widths[l + 1]
                )));
            }
            if let Some(bad) = layer.iter().flatten().find(|&&p| p as usize >= widths[l]) {
                return Err(Error::range(alloc::format!(
                    "layer {} parent index {bad} >= {}",
                    l + 1,
                    widths[l]
                )));
            }
        }
        Ok(ConnectivityMap { seed, widths, parents })
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn widths(&self) -> &[usize] {
        &self.widths
    }

    pub fn input_dim(&self) -> usize {
        self.widths[0]
    }

    /// Number of neuron layers `L`.
    pub fn depth(&self) -> usize {
        self.widths.len() - 1
    }

    pub fn neuron_count(&self) -> usize {
        self.widths[1..].iter().sum()
    }

    /// Parents of the neurons in layer `l` (1-based).
    pub fn layer(&self, l: usize) -> &[[u32; 2]] {
        &self.parents[l - 1]
    }

    pub fn layers(&self) -> impl Iterator<Item = &[[u32; 2]]> {
        self.parents.iter().map(Vec::as_slice)
    }
}

fn validate_widths(widths: &[usize]) -> Result<()> {
    if widths.len() < 2 {
        return Err(Error::config("need an input width and at least one neuron layer"));
    }
    if let Some(l) = widths.iter().position(|&w| w == 0) {
        return Err(Error::config(alloc::format!("layer {l} has zero width")));
    }
    if widths.iter().any(|&w| w > u32::MAX as usize) {
        return Err(Error::config("layer width exceeds u32 range"));
    }
    Ok(())
}
