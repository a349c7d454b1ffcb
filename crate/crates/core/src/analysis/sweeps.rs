use alloc::vec;
use alloc::vec::Vec;

use crate::data::{bayes_accuracy_gaussians, DatasetKind};
use crate::experiment::{run_pipeline, Arch, Recipe};
use crate::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct SeparationRow {
    pub sep: f64,
    /// Circuit accuracy and UNKNOWN output fraction of the ternary run.
    pub ternary: Result<(f64, f64)>,
    /// Circuit accuracy of the binary run, when requested.
    pub binary: Option<Result<f64>>,
    pub bayes: f64,
}

/// Gaussians at each separation, trained with `recipe`'s settings. A failed
/// run is recorded in its row; the sweep carries on.
pub fn separation_sweep(seps: &[f64], recipe: &Recipe, with_binary: bool) -> Vec<SeparationRow> {
    seps.iter()
        .map(|&sep| {
            let mut r = recipe.with_arch(Arch::Ternary);
            r.dataset = DatasetKind::Gaussians { sep };
            let ternary = run_pipeline(&r).map(|o| (o.gap.circuit_accuracy, o.gap.unknown_fraction));
            let binary = with_binary.then(|| run_pipeline(&r.with_arch(Arch::Binary)).map(|o| o.gap.circuit_accuracy));
            SeparationRow { sep, ternary, binary, bayes: bayes_accuracy_gaussians(sep) }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeltaRow {
    pub delta: f64,
    pub seed: u64,
    /// Circuit accuracy, UNKNOWN output fraction, gap in points, input UNKNOWN share.
    pub result: Result<(f64, f64, f64, f64)>,
}

/// One ternary run per `(delta, seed)` pair.
pub fn delta_sweep(deltas: &[f64], seeds: &[u64], recipe: &Recipe) -> Vec<DeltaRow> {
    let mut rows = Vec::new();
    for &delta in deltas {
        for &seed in seeds {
            let mut r = recipe.with_arch(Arch::Ternary);
            r.encoder.delta = delta;
            r.train.seed = seed;
            let result = run_pipeline(&r).map(|o| {
                (o.gap.circuit_accuracy, o.gap.unknown_fraction, o.gap.gap_pp, o.input_unknown_share)
            });
            rows.push(DeltaRow { delta, seed, result });
        }
    }
    rows
}

/// Body widths paired with each resolution (bins per feature).
pub const RESOLUTION_WIDTHS: [(usize, usize); 4] = [(2, 128), (4, 256), (8, 512), (16, 1024)];

#[derive(Debug, Clone, PartialEq)]
pub struct ResolutionRow {
    /// Bins per feature; the encoder uses `resolution − 1` thresholds.
    pub resolution: usize,
    pub input_dim: usize,
    pub body: Vec<usize>,
    /// Circuit accuracy, UNKNOWN output fraction, input UNKNOWN share.
    pub result: Result<(f64, f64, f64)>,
}

/// Width per resolution: the table entry when listed, else `recipe.body`.
pub fn resolution_sweep(resolutions: &[usize], recipe: &Recipe, scale_widths: bool) -> Vec<ResolutionRow> {
    resolutions
        .iter()
        .map(|&res| {
            let mut r = recipe.with_arch(Arch::Ternary);
            r.encoder.thresholds = res.saturating_sub(1).max(1);
            if scale_widths {
                if let Some(&(_, w)) = RESOLUTION_WIDTHS.iter().find(|(k, _)| *k == res) {
                    r.body = vec![w; recipe.body.len()];
                }
            }
            let result = run_pipeline(&r).map(|o| (o.gap.circuit_accuracy, o.gap.unknown_fraction, o.input_unknown_share));
            ResolutionRow { resolution: res, input_dim: 2 * r.encoder.thresholds, body: r.body.clone(), result }
        })
        .collect()
}

/// Number of adjacent pairs that break a nonincreasing sequence by more
/// than `tol`.
pub fn inversions(values: &[f64], tol: f64) -> usize {
    values.windows(2).filter(|w| w[1] > w[0] + tol).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inversion_counting() {
        assert_eq!(inversions(&[0.5, 0.4, 0.45, 0.3], 0.0), 1);
        assert_eq!(inversions(&[0.5, 0.4, 0.45, 0.3], 0.1), 0);
        assert_eq!(inversions(&[], 0.0), 0);
    }

    #[test]
    fn tiny_sweeps_produce_rows() {
        let mut r = Recipe::standard(Arch::Ternary);
        r.n = 200;
        r.body = vec![16];
        r.output = 8;
        r.tau = 1.0;
        r.train.steps = 20;
        r.train.batch_size = 20;
        let rows = separation_sweep(&[0.5, 4.0], &r, false);
        assert_eq!(rows.len(), 2);
        assert!(rows.iter().all(|row| row.ternary.is_ok() && row.binary.is_none()));
        let rows = delta_sweep(&[0.0, 1.0], &[1, 2], &r);
        assert_eq!(rows.len(), 4);
        let rows = resolution_sweep(&[2, 4], &r, false);
        assert_eq!(rows[0].input_dim, 2);
        assert_eq!(rows[1].input_dim, 6);
        assert!(rows.iter().all(|row| row.result.is_ok()));

        let mut bad = r.clone();
        bad.output = 7;
        assert!(resolution_sweep(&[4], &bad, false)[0].result.is_err());
    }
}
