use alloc::vec::Vec;

use super::Dataset;
use crate::algebra::Trit;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EncodingMode {
    /// Three-way comparison with an UNKNOWN band around each threshold.
    Ternary,
    /// Bit `i` is set iff the value exceeds threshold `i`.
    BinaryThermometer,
}

impl EncodingMode {
    pub fn name(self) -> &'static str {
        match self {
            EncodingMode::Ternary => "ternary",
            EncodingMode::BinaryThermometer => "binary_thermometer",
        }
    }

    pub fn from_name(s: &str) -> Option<EncodingMode> {
        match s {
            "ternary" => Some(EncodingMode::Ternary),
            "binary_thermometer" | "binary" => Some(EncodingMode::BinaryThermometer),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThresholdPlacement {
    /// `θ_i = lo + i (hi − lo) / (K + 1)`.
    Uniform,
    /// Empirical `i / (K + 1)` quantiles of the fitting data.
    Quantile,
}

impl ThresholdPlacement {
    pub fn name(self) -> &'static str {
        match self {
            ThresholdPlacement::Uniform => "uniform",
            ThresholdPlacement::Quantile => "quantile",
        }
    }

    pub fn from_name(s: &str) -> Option<ThresholdPlacement> {
        match s {
            "uniform" => Some(ThresholdPlacement::Uniform),
            "quantile" => Some(ThresholdPlacement::Quantile),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EncoderConfig {
    /// Thresholds per feature `K`; values fall into `K + 1` bins.
    pub thresholds: usize,
    /// UNKNOWN band width as a fraction of the threshold spacing.
    pub delta: f64,
    pub mode: EncodingMode,
    pub placement: ThresholdPlacement,
}

impl Default for EncoderConfig {
    fn default() -> Self {
        EncoderConfig { thresholds: 3, delta: 1.0, mode: EncodingMode::Ternary, placement: ThresholdPlacement::Uniform }
    }
}

impl EncoderConfig {
    pub fn validate(&self) -> Result<()> {
        if self.thresholds == 0 {
            return Err(Error::config("need at least one threshold per feature"));
        }
        if !(0.0..=1.0).contains(&self.delta) {
            return Err(Error::config(alloc::format!("delta {} not in [0, 1]", self.delta)));
        }
        Ok(())
    }

    /// Number of bins per feature, the "resolution".
    pub fn resolution(&self) -> usize {
        self.thresholds + 1
    }
}

/// An encoder fitted to the per-feature ranges of a training split.
#[derive(Debug, Clone, PartialEq)]
pub struct Encoder {
    config: EncoderConfig,
    ranges: Vec<(f64, f64)>,
    thresholds: Vec<Vec<f64>>,
    half_bands: Vec<Vec<f64>>,
}

/// Encoded samples: `soft` feeds the trainable network, `hard` the circuit.
#[derive(Debug, Clone, PartialEq)]
pub struct EncodedSet {
    pub soft: Vec<Vec<f64>>,
    pub hard: Vec<Vec<Trit>>,
    pub labels: Vec<usize>,
}

impl EncodedSet {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

impl Encoder {
    pub fn fit(config: EncoderConfig, train: &Dataset) -> Result<Encoder> {
        config.validate()?;
        let k = config.thresholds;
        let mut ranges = Vec::with_capacity(train.dim());
        let mut thresholds = Vec::with_capacity(train.dim());
        for f in 0..train.dim() {
            let mut col: Vec<f64> = train.features().iter().map(|x| x[f]).collect();
            col.sort_by(f64::total_cmp);
            let (lo, hi) = (col[0], col[col.len() - 1]);
            ranges.push((lo, hi));
            thresholds.push(match config.placement {
                ThresholdPlacement::Uniform => (1..=k).map(|i| lo + i as f64 * (hi - lo) / (k + 1) as f64).collect(),
                ThresholdPlacement::Quantile => (1..=k).map(|i| quantile(&col, i as f64 / (k + 1) as f64)).collect(),
            });
        }
        Encoder::from_parts(config, ranges, thresholds)
    }

    /// Rebuild from stored ranges and thresholds.
    pub fn from_parts(config: EncoderConfig, ranges: Vec<(f64, f64)>, thresholds: Vec<Vec<f64>>) -> Result<Encoder> {
        config.validate()?;
        if ranges.len() != thresholds.len() || ranges.is_empty() {
            return Err(Error::shape("encoder ranges and thresholds differ in feature count"));
        }
        let mut half_bands = Vec::with_capacity(ranges.len());
        for (&(lo, hi), th) in ranges.iter().zip(&thresholds) {
            if th.len() != config.thresholds {
                return Err(Error::shape(alloc::format!("{} thresholds, expected {}", th.len(), config.thresholds)));
            }
            if !(lo <= hi) || th.windows(2).any(|w| w[0] > w[1]) {
                return Err(Error::range("encoder thresholds must be sorted within a valid range"));
            }
            half_bands.push(match config.placement {
                ThresholdPlacement::Uniform => {
                    let spacing = (hi - lo) / (config.thresholds + 1) as f64;
                    alloc::vec![config.delta * spacing / 2.0; th.len()]
                }
                ThresholdPlacement::Quantile => (0..th.len())
                    .map(|i| {
                        let left = if i == 0 { th[0] - lo } else { th[i] - th[i - 1] };
                        let right = if i + 1 == th.len() { hi - th[i] } else { th[i + 1] - th[i] };
                        config.delta * left.min(right) / 2.0
                    })
                    .collect(),
            });
        }
        Ok(Encoder { config, ranges, thresholds, half_bands })
    }

    pub fn config(&self) -> &EncoderConfig {
        &self.config
    }

    pub fn ranges(&self) -> &[(f64, f64)] {
        &self.ranges
    }

    pub fn thresholds(&self) -> &[Vec<f64>] {
        &self.thresholds
    }

    pub fn input_dim(&self) -> usize {
        self.ranges.len()
    }

    pub fn output_dim(&self) -> usize {
        self.ranges.len() * self.config.thresholds
    }

    fn check(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.input_dim() {
            return Err(Error::shape(alloc::format!("sample has {} features, encoder expects {}", x.len(), self.input_dim())));
        }
        Ok(())
    }

    /// `+1` above the band, `−1` below it, UNKNOWN inside. With `δ = 0` the
    /// band is empty and the code is a pure sign comparison (ties go to `−1`).
    pub fn encode_ternary(&self, x: &[f64]) -> Result<Vec<Trit>> {
        self.check(x)?;
        let mut out = Vec::with_capacity(self.output_dim());
        for ((&v, th), hb) in x.iter().zip(&self.thresholds).zip(&self.half_bands) {
            for (&t, &b) in th.iter().zip(hb) {
                out.push(if v > t + b {
                    Trit::True
                } else if v < t - b || self.config.delta == 0.0 {
                    Trit::False
                } else {
                    Trit::Unknown
                });
            }
        }
        Ok(out)
    }

    pub fn encode_binary(&self, x: &[f64]) -> Result<Vec<bool>> {
        self.check(x)?;
        Ok(x.iter().zip(&self.thresholds).flat_map(|(&v, th)| th.iter().map(move |&t| v > t)).collect())
    }

    /// Encode a dataset in the configured mode. Binary codes are fed to the
    /// soft network as `0/1` and to the circuit as `−1/+1`.
    pub fn encode_set(&self, ds: &Dataset) -> Result<EncodedSet> {
        let mut soft = Vec::with_capacity(ds.len());
        let mut hard = Vec::with_capacity(ds.len());
        for x in ds.features() {
            match self.config.mode {
                EncodingMode::Ternary => {
                    let t = self.encode_ternary(x)?;
                    soft.push(t.iter().map(|v| v.as_f64()).collect());
                    hard.push(t);
                }
                EncodingMode::BinaryThermometer => {
                    let bits = self.encode_binary(x)?;
                    soft.push(bits.iter().map(|&b| b as u8 as f64).collect());
                    hard.push(bits.iter().map(|&b| if b { Trit::True } else { Trit::False }).collect());
                }
            }
        }
        Ok(EncodedSet { soft, hard, labels: ds.labels().to_vec() })
    }

    /// Share of ternary input codes that are UNKNOWN over `samples`.
    pub fn unknown_share(&self, samples: &[Vec<f64>]) -> Result<f64> {
        if samples.is_empty() {
            return Err(Error::Empty("samples"));
        }
        let mut zeros = 0usize;
        for x in samples {
            zeros += self.encode_ternary(x)?.iter().filter(|t| **t == Trit::Unknown).count();
        }
        Ok(zeros as f64 / (samples.len() * self.output_dim()) as f64)
    }
}

/// Linear-interpolated quantile of sorted data.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let i = libm::floor(pos) as usize;
    let frac = pos - i as f64;
    if i + 1 < sorted.len() {
        sorted[i] + frac * (sorted[i + 1] - sorted[i])
    } else {
        sorted[i]
    }
}
