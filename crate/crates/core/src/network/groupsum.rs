use alloc::vec::Vec;

use crate::{Error, Result};

/// Class readout: the output layer is split into `k` contiguous equal
/// groups, each summed and divided by the temperature `tau`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupSumConfig {
    pub k: usize,
    pub tau: f64,
}

impl GroupSumConfig {
    pub fn new(k: usize, tau: f64) -> Result<GroupSumConfig> {
        let cfg = GroupSumConfig { k, tau };
        cfg.check()?;
        Ok(cfg)
    }

    pub fn check(&self) -> Result<()> {
        if self.k < 2 {
            return Err(Error::config(alloc::format!("need at least 2 classes, got {}", self.k)));
        }
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            return Err(Error::config(alloc::format!("temperature must be positive, got {}", self.tau)));
        }
        Ok(())
    }

    pub fn check_output_width(&self, n_out: usize) -> Result<()> {
        self.check()?;
        if n_out % self.k != 0 {
            return Err(Error::config(alloc::format!(
                "output width {n_out} is not divisible by k = {}",
                self.k
            )));
        }
        Ok(())
    }

    pub fn group_size(&self, n_out: usize) -> usize {
        n_out / self.k
    }

    pub fn scores(&self, outputs: &[f64]) -> Vec<f64> {
        let g = self.group_size(outputs.len());
        outputs.chunks_exact(g).map(|c| c.iter().sum::<f64>() / self.tau).collect()
    }
}

/// Index of the largest score; ties go to the lowest index.
pub fn argmax(scores: &[f64]) -> usize {
    let mut best = 0;
    for (i, &s) in scores.iter().enumerate().skip(1) {
        if s > scores[best] {
            best = i;
        }
    }
    best
}

/// Top score minus runner-up.
pub fn margin(scores: &[f64]) -> f64 {
    let mut top = f64::NEG_INFINITY;
    let mut second = f64::NEG_INFINITY;
    for &s in scores {
        if s > top {
            second = top;
            top = s;
        } else if s > second {
            second = s;
        }
    }
    if second == f64::NEG_INFINITY {
        0.0
    } else {
        top - second
    }
}
