//! End-to-end pipeline: generate, split, encode, train, harden, evaluate.

use alloc::vec;
use alloc::vec::Vec;

use crate::analysis::{default_retention_grid, selective_curve, CoverageCurve};
use crate::circuit::{gap_report, harden_network, hardening_error, Circuit, GapReport};
use crate::data::{gen_dataset, Dataset, DatasetKind, EncodedSet, Encoder, EncoderConfig, EncodingMode};
use crate::network::{BinaryDlgnNetwork, GroupSumConfig, PstNetwork};
use crate::training::{soft_accuracy, train, History, LossKind, TrainConfig, TrainData};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Arch {
    /// Polynomial surrogate network hardened to ternary gates.
    Ternary,
    /// Softmax-over-16-gates baseline.
    Binary,
}

impl Arch {
    pub fn name(self) -> &'static str {
        match self {
            Arch::Ternary => "ternary",
            Arch::Binary => "binary",
        }
    }

    pub fn from_name(s: &str) -> Option<Arch> {
        match s {
            "ternary" => Some(Arch::Ternary),
            "binary" => Some(Arch::Binary),
            _ => None,
        }
    }

    pub fn encoding_mode(self) -> EncodingMode {
        match self {
            Arch::Ternary => EncodingMode::Ternary,
            Arch::Binary => EncodingMode::BinaryThermometer,
        }
    }
}

/// Everything needed to reproduce one synthetic-data run.
#[derive(Debug, Clone, PartialEq)]
pub struct Recipe {
    pub arch: Arch,
    pub dataset: DatasetKind,
    pub n: usize,
    pub noise: f64,
    pub data_seed: u64,
    pub test_fraction: f64,
    pub encoder: EncoderConfig,
    /// Hidden widths; the output layer is appended.
    pub body: Vec<usize>,
    pub output: usize,
    pub k: usize,
    pub tau: f64,
    /// `train.seed` also seeds connectivity and initial parameters.
    pub train: TrainConfig,
}

impl Recipe {
    /// The matched synthetic-data setup: Moons, body `[512]^3`, 200 outputs,
    /// `k = 2`, `τ = 10`, three thresholds per feature, 5000 steps.
    pub fn standard(arch: Arch) -> Recipe {
        let (loss, lr) = match arch {
            Arch::Ternary => (LossKind::Mse, 0.02),
            Arch::Binary => (LossKind::CrossEntropy, 0.01),
        };
        Recipe {
            arch,
            dataset: DatasetKind::Moons,
            n: 2500,
            noise: 0.5,
            data_seed: 42,
            test_fraction: 0.2,
            encoder: EncoderConfig { mode: arch.encoding_mode(), ..EncoderConfig::default() },
            body: vec![512; 3],
            output: 200,
            k: 2,
            tau: 10.0,
            train: TrainConfig { loss, learning_rate: lr, ..TrainConfig::default() },
        }
    }

    pub fn widths(&self) -> Vec<usize> {
        let mut w = self.body.clone();
        w.push(self.output);
        w
    }

    pub fn readout(&self) -> Result<GroupSumConfig> {
        GroupSumConfig::new(self.k, self.tau)
    }

    pub fn with_arch(&self, arch: Arch) -> Recipe {
        let mut r = self.clone();
        r.arch = arch;
        r.encoder.mode = arch.encoding_mode();
        r.train.loss = match arch {
            Arch::Ternary => LossKind::Mse,
            Arch::Binary => LossKind::CrossEntropy,
        };
        r
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TrainedModel {
    Ternary(PstNetwork),
    Binary(BinaryDlgnNetwork),
}

impl TrainedModel {
    /// Fresh network for `recipe` on `input_dim` encoded inputs, seeded by
    /// `recipe.train.seed`.
    pub fn init(recipe: &Recipe, input_dim: usize) -> Result<TrainedModel> {
        let readout = recipe.readout()?;
        let widths = recipe.widths();
        let seed = recipe.train.seed;
        Ok(match recipe.arch {
            Arch::Ternary => TrainedModel::Ternary(PstNetwork::init(input_dim, &widths, readout, seed)?),
            Arch::Binary => TrainedModel::Binary(BinaryDlgnNetwork::init(input_dim, &widths, readout, seed)?),
        })
    }

    pub fn arch(&self) -> Arch {
        match self {
            TrainedModel::Ternary(_) => Arch::Ternary,
            TrainedModel::Binary(_) => Arch::Binary,
        }
    }

    pub fn train(&self, data: TrainData<'_>, cfg: &TrainConfig) -> Result<(TrainedModel, History)> {
        Ok(match self {
            TrainedModel::Ternary(n) => {
                let (n, h) = train(n, data, cfg)?;
                (TrainedModel::Ternary(n), h)
            }
            TrainedModel::Binary(n) => {
                let (n, h) = train(n, data, cfg)?;
                (TrainedModel::Binary(n), h)
            }
        })
    }

    pub fn harden(&self) -> Result<Circuit> {
        match self {
            TrainedModel::Ternary(n) => Ok(harden_network(n)),
            TrainedModel::Binary(n) => n.harden_binary(),
        }
    }

    pub fn soft_accuracy(&self, set: &EncodedSet) -> Result<f64> {
        match self {
            TrainedModel::Ternary(n) => soft_accuracy(n, &set.soft, &set.labels),
            TrainedModel::Binary(n) => soft_accuracy(n, &set.soft, &set.labels),
        }
    }

    /// Soft model versus `circuit` on an encoded set.
    pub fn gap(&self, circuit: &Circuit, set: &EncodedSet) -> Result<GapReport> {
        match self {
            TrainedModel::Ternary(n) => gap_report(n, circuit, &set.soft, &set.hard, &set.labels, Some(hardening_error(n))),
            TrainedModel::Binary(n) => gap_report(n, circuit, &set.soft, &set.hard, &set.labels, None),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineOutput {
    pub encoder: Encoder,
    pub model: TrainedModel,
    pub history: History,
    pub circuit: Circuit,
    pub gap: GapReport,
    pub selective: CoverageCurve,
    /// Share of UNKNOWN codes in the encoded test inputs.
    pub input_unknown_share: f64,
}

/// Fit the encoder on `train` and encode both splits.
pub fn encode_splits(recipe: &Recipe, train: &Dataset, test: &Dataset) -> Result<(Encoder, EncodedSet, EncodedSet)> {
    let mut enc_cfg = recipe.encoder;
    enc_cfg.mode = recipe.arch.encoding_mode();
    let encoder = Encoder::fit(enc_cfg, train)?;
    let train_set = encoder.encode_set(train)?;
    let test_set = encoder.encode_set(test)?;
    Ok((encoder, train_set, test_set))
}

/// Generated train and test splits for a recipe.
pub fn recipe_data(recipe: &Recipe) -> Result<(Dataset, Dataset)> {
    let ds = gen_dataset(recipe.dataset, recipe.n, recipe.noise, recipe.data_seed)?;
    ds.split(recipe.test_fraction, recipe.data_seed)
}

/// Encoded train and test splits for a recipe.
pub fn prepare_data(recipe: &Recipe) -> Result<(Encoder, EncodedSet, EncodedSet)> {
    let (train, test) = recipe_data(recipe)?;
    encode_splits(recipe, &train, &test)
}

/// Train on encoded splits, harden, and evaluate on the test split.
pub fn run_on(recipe: &Recipe, encoder: Encoder, train_set: &EncodedSet, test_set: &EncodedSet) -> Result<PipelineOutput> {
    let init = TrainedModel::init(recipe, encoder.output_dim())?;
    let data = TrainData { x: &train_set.soft, y: &train_set.labels, eval: Some((&test_set.soft, &test_set.labels)) };
    let (model, history) = init.train(data, &recipe.train)?;
    let circuit = model.harden()?;
    let gap = model.gap(&circuit, test_set)?;
    let selective = selective_curve(&circuit, &test_set.hard, &test_set.labels, &default_retention_grid())?;
    let input_unknown_share = input_unknown_share(test_set);
    Ok(PipelineOutput { encoder, model, history, circuit, gap, selective, input_unknown_share })
}

pub fn run_pipeline(recipe: &Recipe) -> Result<PipelineOutput> {
    let (encoder, train_set, test_set) = prepare_data(recipe)?;
    run_on(recipe, encoder, &train_set, &test_set)
}

/// Share of UNKNOWN codes over all encoded inputs of a set.
pub fn input_unknown_share(set: &EncodedSet) -> f64 {
    let total: usize = set.hard.iter().map(Vec::len).sum();
    let zeros = set.hard.iter().flatten().filter(|t| **t == crate::Trit::Unknown).count();
    zeros as f64 / total.max(1) as f64
}
