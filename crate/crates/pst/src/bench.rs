//! Per-step training wall time of the ternary and binary networks at
//! matched widths.

use std::time::Instant;

use pst_core::experiment::{encode_splits, recipe_data, Arch, Recipe, TrainedModel};
use pst_core::training::{TrainData, Trainable, Trainer};
use pst_core::{BinaryDlgnNetwork, PstNetwork};

use crate::error::Result;

/// Timed steps below this give noisy per-step figures.
pub const MIN_RELIABLE_STEPS: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct ArchTiming {
    pub arch: Arch,
    pub params: usize,
    pub mean_ms: f64,
    pub median_ms: f64,
    pub min_ms: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub widths: Vec<usize>,
    pub warmup: usize,
    pub steps: usize,
    pub ternary: ArchTiming,
    pub binary: ArchTiming,
    /// Binary over ternary median step time; above 1 means ternary is faster.
    pub ratio: f64,
    pub warning: Option<String>,
}

fn time_steps<M: Trainable>(model: &M, data: TrainData<'_>, recipe: &Recipe, warmup: usize, steps: usize) -> Result<Vec<f64>> {
    let mut cfg = recipe.train.clone();
    cfg.steps = warmup + steps;
    let mut trainer = Trainer::new(model, data, &cfg)?;
    for _ in 0..warmup {
        trainer.step()?;
    }
    let mut times = Vec::with_capacity(steps);
    for _ in 0..steps {
        let start = Instant::now();
        trainer.step()?;
        times.push(start.elapsed().as_secs_f64() * 1e3);
    }
    Ok(times)
}

fn summarize(arch: Arch, params: usize, mut times: Vec<f64>) -> ArchTiming {
    times.sort_by(f64::total_cmp);
    let n = times.len();
    let median = if n == 0 {
        f64::NAN
    } else if n % 2 == 1 {
        times[n / 2]
    } else {
        0.5 * (times[n / 2 - 1] + times[n / 2])
    };
    ArchTiming {
        arch,
        params,
        mean_ms: times.iter().sum::<f64>() / n.max(1) as f64,
        median_ms: median,
        min_ms: times.first().copied().unwrap_or(f64::NAN),
    }
}

fn time_arch(recipe: &Recipe, arch: Arch, warmup: usize, steps: usize) -> Result<ArchTiming> {
    let r = recipe.with_arch(arch);
    let (train, test) = recipe_data(&r)?;
    let (encoder, train_set, _) = encode_splits(&r, &train, &test)?;
    let data = TrainData { x: &train_set.soft, y: &train_set.labels, eval: None };
    let model = TrainedModel::init(&r, encoder.output_dim())?;
    let (params, times) = match &model {
        TrainedModel::Ternary(n) => (n.params().len(), time_steps::<PstNetwork>(n, data, &r, warmup, steps)?),
        TrainedModel::Binary(n) => (n.params().len(), time_steps::<BinaryDlgnNetwork>(n, data, &r, warmup, steps)?),
    };
    Ok(summarize(arch, params, times))
}

/// Time `steps` updates of each architecture after `warmup` untimed ones.
pub fn bench(recipe: &Recipe, warmup: usize, steps: usize) -> Result<BenchReport> {
    let ternary = time_arch(recipe, Arch::Ternary, warmup, steps)?;
    let binary = time_arch(recipe, Arch::Binary, warmup, steps)?;
    let warning = (steps < MIN_RELIABLE_STEPS)
        .then(|| format!("only {steps} timed steps (< {MIN_RELIABLE_STEPS}); per-step times have wide variance"));
    Ok(BenchReport {
        widths: recipe.widths(),
        warmup,
        steps,
        ratio: binary.median_ms / ternary.median_ms,
        ternary,
        binary,
        warning,
    })
}
