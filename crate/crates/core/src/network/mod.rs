//! Soft forward models: the PST ternary network and the binary
//! softmax-over-gates baseline. Both share the same layered skeleton with
//! frozen random two-parent connectivity and a GroupSum readout.

pub(crate) mod binary;
mod connectivity;
mod groupsum;
mod pst;

pub use binary::{boolean_gate_corners, gate_relaxations, BinaryDlgnNetwork, BOOLEAN_GATE_NAMES};
pub use connectivity::ConnectivityMap;
pub use groupsum::{argmax, margin, GroupSumConfig};
pub use pst::{clip, PstNetwork, SoftForward, INIT_STD};

use alloc::vec::Vec;

use crate::Result;

/// Anything that maps one encoded sample to class scores.
pub trait SoftModel {
    fn readout(&self) -> &GroupSumConfig;
    fn input_dim(&self) -> usize;
    fn class_scores(&self, x: &[f64]) -> Result<Vec<f64>>;

    fn predict(&self, x: &[f64]) -> Result<usize> {
        Ok(argmax(&self.class_scores(x)?))
    }
}
