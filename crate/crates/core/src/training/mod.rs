//! Objective, analytic gradients, Adam and the minibatch training loop.

mod adam;
mod backward;
mod loss;

pub use adam::{adam_step, AdamConfig, AdamState};
pub use backward::{backward, total_loss, Batch, LossParts, Trainable};
pub use loss::{commitment_loss, dist_to_trits, fourier_loss, task_loss, task_loss_grad, LossKind};

use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;

use crate::network::SoftModel;
use crate::rng::{stream, Stream};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    /// Number of optimiser steps `T`; zero returns the initial model.
    pub steps: usize,
    pub batch_size: usize,
    pub learning_rate: f64,
    pub lambda_max: f64,
    pub gamma: f64,
    /// Weight `β` of the Fourier L1 regulariser.
    pub fourier_weight: f64,
    pub loss: LossKind,
    pub seed: u64,
    /// Evaluate on the held-out set every this many steps (0 disables).
    pub eval_every: usize,
    pub adam: AdamConfig,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            steps: 5000,
            batch_size: 100,
            learning_rate: 0.01,
            lambda_max: 0.1,
            gamma: 2.0,
            fourier_weight: 0.0,
            loss: LossKind::Mse,
            seed: 42,
            eval_every: 500,
            adam: AdamConfig::default(),
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str, v: f64| Error::config(alloc::format!("{what} = {v} is out of range"));
        if self.batch_size == 0 {
            return Err(Error::config("batch_size must be >= 1"));
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(bad("learning_rate", self.learning_rate));
        }
        if !(self.lambda_max >= 0.0 && self.lambda_max.is_finite()) {
            return Err(bad("lambda_max", self.lambda_max));
        }
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return Err(bad("gamma", self.gamma));
        }
        if !(self.fourier_weight >= 0.0 && self.fourier_weight.is_finite()) {
            return Err(bad("fourier_weight", self.fourier_weight));
        }
        self.adam.validate()
    }
}

/// `λ(t) = λ_max (t/T)^γ`, clamped to `t ≤ T`.
pub fn lambda_schedule(t: usize, cfg: &TrainConfig) -> f64 {
    if cfg.steps == 0 || cfg.lambda_max == 0.0 {
        return 0.0;
    }
    let r = t.min(cfg.steps) as f64 / cfg.steps as f64;
    cfg.lambda_max * libm::pow(r, cfg.gamma)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepRecord {
    pub step: usize,
    pub task_loss: f64,
    pub commitment_loss: f64,
    pub fourier_loss: f64,
    pub lambda: f64,
    pub total_loss: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalRecord {
    pub step: usize,
    pub soft_accuracy: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct History {
    pub steps: Vec<StepRecord>,
    pub evals: Vec<EvalRecord>,
}

/// Training and optional held-out samples.
#[derive(Debug, Clone, Copy)]
pub struct TrainData<'a> {
    pub x: &'a [Vec<f64>],
    pub y: &'a [usize],
    pub eval: Option<(&'a [Vec<f64>], &'a [usize])>,
}

/// Draws minibatches from reshuffled passes over the data.
struct BatchSampler {
    order: Vec<usize>,
    pos: usize,
    rng: ChaCha8Rng,
}

impl BatchSampler {
    fn new(n: usize, seed: u64) -> BatchSampler {
        let mut s = BatchSampler { order: (0..n).collect(), pos: n, rng: stream(seed, Stream::Batches) };
        s.reshuffle();
        s
    }

    fn reshuffle(&mut self) {
        self.order.shuffle(&mut self.rng);
        self.pos = 0;
    }

    fn next_into(&mut self, size: usize, out: &mut Vec<usize>) {
        out.clear();
        while out.len() < size {
            if self.pos == self.order.len() {
                self.reshuffle();
            }
            out.push(self.order[self.pos]);
            self.pos += 1;
        }
    }
}

pub fn soft_accuracy<M: SoftModel>(model: &M, x: &[Vec<f64>], y: &[usize]) -> Result<f64> {
    if y.is_empty() {
        return Err(Error::Empty("evaluation set"));
    }
    let mut correct = 0;
    for (xi, &yi) in x.iter().zip(y) {
        if model.predict(xi)? == yi {
            correct += 1;
        }
    }
    Ok(correct as f64 / y.len() as f64)
}

/// Step-wise minibatch Adam. Update `s` (0-based) uses the schedule
/// position `t = s + 1`, so the final step of a `cfg.steps` run sees `λ_max`.
pub struct Trainer<'a, M: Trainable> {
    model: M,
    data: TrainData<'a>,
    cfg: TrainConfig,
    sampler: BatchSampler,
    idx: Vec<usize>,
    bx: Vec<Vec<f64>>,
    by: Vec<usize>,
    grad: Vec<f64>,
    adam: AdamState,
    history: History,
}

impl<'a, M: Trainable> Trainer<'a, M> {
    pub fn new(model: &M, data: TrainData<'a>, cfg: &TrainConfig) -> Result<Trainer<'a, M>> {
        cfg.validate()?;
        if data.x.is_empty() {
            return Err(Error::Empty("training set"));
        }
        if data.x.len() != data.y.len() {
            return Err(Error::shape("training inputs and labels differ in length"));
        }
        let batch_size = cfg.batch_size.min(data.x.len());
        let n_params = model.params().len();
        Ok(Trainer {
            model: model.clone(),
            data,
            cfg: cfg.clone(),
            sampler: BatchSampler::new(data.x.len(), cfg.seed),
            idx: Vec::with_capacity(batch_size),
            bx: Vec::with_capacity(batch_size),
            by: Vec::with_capacity(batch_size),
            grad: vec![0.0; n_params],
            adam: AdamState::new(n_params),
            history: History::default(),
        })
    }

    /// Updates completed so far.
    pub fn steps_done(&self) -> usize {
        self.history.steps.len()
    }

    pub fn model(&self) -> &M {
        &self.model
    }

    pub fn step(&mut self) -> Result<StepRecord> {
        let t = self.steps_done() + 1;
        let batch_size = self.cfg.batch_size.min(self.data.x.len());
        self.sampler.next_into(batch_size, &mut self.idx);
        self.bx.clear();
        self.by.clear();
        for &i in &self.idx {
            self.bx.push(self.data.x[i].clone());
            self.by.push(self.data.y[i]);
        }
        let parts = self.model.loss_and_grad(Batch::new(&self.bx, &self.by)?, t, &self.cfg, &mut self.grad)?;
        if !parts.total.is_finite() || self.grad.iter().any(|g| !g.is_finite()) {
            return Err(Error::NonFiniteLoss { step: t });
        }
        let record = StepRecord {
            step: t,
            task_loss: parts.task,
            commitment_loss: parts.commitment,
            fourier_loss: parts.fourier,
            lambda: parts.lambda,
            total_loss: parts.total,
        };
        self.history.steps.push(record);
        adam_step(self.model.params_mut(), &self.grad, &mut self.adam, self.cfg.learning_rate, &self.cfg.adam)?;
        if let Some((ex, ey)) = self.data.eval {
            let every = self.cfg.eval_every;
            if every > 0 && (t % every == 0 || t == self.cfg.steps) && !ey.is_empty() {
                let acc = soft_accuracy(&self.model, ex, ey)?;
                self.history.evals.push(EvalRecord { step: t, soft_accuracy: acc });
            }
        }
        Ok(record)
    }

    pub fn finish(self) -> (M, History) {
        (self.model, self.history)
    }
}

/// Runs `cfg.steps` updates. Zero steps returns the model unchanged.
pub fn train<M: Trainable>(model: &M, data: TrainData<'_>, cfg: &TrainConfig) -> Result<(M, History)> {
    cfg.validate()?;
    if cfg.steps == 0 {
        return Ok((model.clone(), History::default()));
    }
    let mut trainer = Trainer::new(model, data, cfg)?;
    trainer.history.steps.reserve(cfg.steps);
    for _ in 0..cfg.steps {
        trainer.step()?;
    }
    Ok(trainer.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::hardening_error;
    use crate::network::{GroupSumConfig, PstNetwork};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn schedule_examples() {
        let cfg = TrainConfig { steps: 100, lambda_max: 0.1, gamma: 2.0, ..TrainConfig::default() };
        assert_eq!(lambda_schedule(0, &cfg), 0.0);
        assert_eq!(lambda_schedule(100, &cfg), 0.1);
        assert!((lambda_schedule(50, &cfg) - 0.025).abs() < 1e-15);
        let mut prev = 0.0;
        for t in 0..=100 {
            let l = lambda_schedule(t, &cfg);
            assert!(l >= prev);
            prev = l;
        }
    }

    #[test]
    fn validation() {
        assert!(TrainConfig::default().validate().is_ok());
        assert!(TrainConfig { gamma: 0.0, ..TrainConfig::default() }.validate().is_err());
        assert!(TrainConfig { lambda_max: -1.0, ..TrainConfig::default() }.validate().is_err());
        assert!(TrainConfig { batch_size: 0, ..TrainConfig::default() }.validate().is_err());
    }

    #[test]
    fn commitment_equals_hardening_error() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for s in 0..50 {
            let mut net = PstNetwork::init(3, &[8, 6, 4], GroupSumConfig::new(2, 1.0).unwrap(), s).unwrap();
            let scale = rng.random_range(0.1..4.0);
            net.coeffs_mut().iter_mut().for_each(|w| *w *= scale);
            assert!((commitment_loss(&net) - hardening_error(&net)).abs() <= 1e-9);
        }
    }

    #[test]
    fn zero_steps_returns_initial_model() {
        let net = PstNetwork::init(2, &[4, 2], GroupSumConfig::new(2, 1.0).unwrap(), 0).unwrap();
        let cfg = TrainConfig { steps: 0, ..TrainConfig::default() };
        let (out, hist) = train(&net, TrainData { x: &[], y: &[], eval: None }, &cfg).unwrap();
        assert_eq!(out, net);
        assert!(hist.steps.is_empty());
    }

    #[test]
    fn nan_is_reported_with_step() {
        let mut net = PstNetwork::init(2, &[4, 2], GroupSumConfig::new(2, 1.0).unwrap(), 0).unwrap();
        net.coeffs_mut()[0] = f64::NAN;
        let x = vec![vec![0.5, -0.5]];
        let y = vec![1];
        let cfg = TrainConfig { steps: 3, lambda_max: 0.1, ..TrainConfig::default() };
        let err = train(&net, TrainData { x: &x, y: &y, eval: None }, &cfg).unwrap_err();
        assert_eq!(err, Error::NonFiniteLoss { step: 1 });
    }

    #[test]
    fn sampler_visits_everything_each_pass() {
        let mut s = BatchSampler::new(10, 1);
        let mut out = Vec::new();
        s.next_into(10, &mut out);
        let mut seen = out.clone();
        seen.sort();
        assert_eq!(seen, (0..10).collect::<Vec<_>>());
        s.next_into(25, &mut out);
        assert_eq!(out.len(), 25);
    }

    #[test]
    fn commitment_descends_under_lambda_only_training() {
        let mut net = PstNetwork::init(3, &[16, 8], GroupSumConfig::new(2, 1.0).unwrap(), 5).unwrap();
        let x = vec![vec![0.3, -0.2, 0.9]];
        let y = vec![0];
        let b = Batch::new(&x, &y).unwrap();
        let cfg = TrainConfig { steps: 1, lambda_max: 1.0, ..TrainConfig::default() };
        let start = commitment_loss(&net);
        let mut state = AdamState::new(net.coeffs().len());
        for _ in 0..500 {
            // Difference of the full and task-only gradients isolates λ 𝓡_A.
            let full = backward(&net, b, 1, &cfg).unwrap();
            let task = backward(&net, b, 0, &cfg).unwrap();
            let g: Vec<f64> = full.iter().zip(&task).map(|(f, t)| f - t).collect();
            adam_step(net.coeffs_mut(), &g, &mut state, 0.005, &cfg.adam).unwrap();
        }
        assert!(commitment_loss(&net) < 0.1 * start);
    }

    #[test]
    fn stepping_matches_train() {
        let net = PstNetwork::init(2, &[8, 4], GroupSumConfig::new(2, 1.0).unwrap(), 4).unwrap();
        let x: Vec<Vec<f64>> = (0..30).map(|i| vec![(i % 3) as f64 - 1.0, (i % 2) as f64 * 2.0 - 1.0]).collect();
        let y: Vec<usize> = (0..30).map(|i| i % 2).collect();
        let data = TrainData { x: &x, y: &y, eval: Some((&x, &y)) };
        let cfg = TrainConfig { steps: 12, batch_size: 7, eval_every: 5, lambda_max: 0.1, ..TrainConfig::default() };
        let mut trainer = Trainer::new(&net, data, &cfg).unwrap();
        for _ in 0..12 {
            trainer.step().unwrap();
        }
        assert_eq!(trainer.steps_done(), 12);
        let (stepped, hist) = trainer.finish();
        let (trained, reference) = train(&net, data, &cfg).unwrap();
        assert_eq!(stepped, trained);
        assert_eq!(hist, reference);
        assert_eq!(hist.evals.iter().map(|e| e.step).collect::<Vec<_>>(), vec![5, 10, 12]);
    }

    #[test]
    fn separable_toy_problem_is_learned() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut x = Vec::new();
        let mut y = Vec::new();
        for _ in 0..400 {
            let a: f64 = rng.random_range(-1.0..=1.0);
            let b: f64 = rng.random_range(-1.0..=1.0);
            x.push(vec![a, b, -a, -b]);
            y.push((a > 0.0) as usize);
        }
        let net = PstNetwork::init(4, &[32, 32, 16], GroupSumConfig::new(2, 4.0).unwrap(), 1).unwrap();
        let cfg = TrainConfig { steps: 2000, batch_size: 50, learning_rate: 0.01, eval_every: 0, ..TrainConfig::default() };
        let (out, hist) = train(&net, TrainData { x: &x, y: &y, eval: None }, &cfg).unwrap();
        assert_eq!(hist.steps.len(), 2000);
        assert!(soft_accuracy(&out, &x, &y).unwrap() >= 0.95);
    }
}
