use alloc::vec;
use alloc::vec::Vec;

use super::loss::{commitment_loss, commitment_residual, fourier_loss, task_loss_grad};
use super::{lambda_schedule, TrainConfig};
use crate::algebra::{monomials, monomials_da, monomials_db, table_of, VANDERMONDE};
use crate::fourier::{monomial_to_fourier, MONOMIAL_TO_FOURIER};
use crate::network::{binary::{gate_relaxation_grads, gate_relaxations}, BinaryDlgnNetwork, PstNetwork, SoftModel};
use crate::{Error, Result};

/// Components of the objective on one batch.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct LossParts {
    pub task: f64,
    pub commitment: f64,
    pub fourier: f64,
    pub lambda: f64,
    pub total: f64,
}

/// A minibatch of encoded inputs and their labels.
#[derive(Debug, Clone, Copy)]
pub struct Batch<'a> {
    pub x: &'a [Vec<f64>],
    pub y: &'a [usize],
}

impl<'a> Batch<'a> {
    pub fn new(x: &'a [Vec<f64>], y: &'a [usize]) -> Result<Batch<'a>> {
        if x.is_empty() {
            return Err(Error::Empty("batch"));
        }
        if x.len() != y.len() {
            return Err(Error::shape(alloc::format!("{} inputs for {} labels", x.len(), y.len())));
        }
        Ok(Batch { x, y })
    }

    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }
}

/// Models the training loop can optimise.
pub trait Trainable: SoftModel + Clone {
    fn params(&self) -> &[f64];
    fn params_mut(&mut self) -> &mut [f64];
    /// Loss at schedule position `t`; `grad` is overwritten with its gradient.
    fn loss_and_grad(&self, batch: Batch<'_>, t: usize, cfg: &TrainConfig, grad: &mut [f64]) -> Result<LossParts>;
    fn loss(&self, batch: Batch<'_>, t: usize, cfg: &TrainConfig) -> Result<LossParts>;
}

/// `𝓛_task + λ(t) 𝓡_A + β 𝓡_F` on one batch.
pub fn total_loss(net: &PstNetwork, batch: Batch<'_>, t: usize, cfg: &TrainConfig) -> Result<f64> {
    Ok(net.loss(batch, t, cfg)?.total)
}

/// Gradient of [`total_loss`] with respect to every coefficient.
pub fn backward(net: &PstNetwork, batch: Batch<'_>, t: usize, cfg: &TrainConfig) -> Result<Vec<f64>> {
    let mut grad = vec![0.0; net.coeffs().len()];
    net.loss_and_grad(batch, t, cfg, &mut grad)?;
    Ok(grad)
}

impl Trainable for PstNetwork {
    fn params(&self) -> &[f64] {
        self.coeffs()
    }

    fn params_mut(&mut self) -> &mut [f64] {
        self.coeffs_mut()
    }

    fn loss(&self, batch: Batch<'_>, t: usize, cfg: &TrainConfig) -> Result<LossParts> {
        let mut task = 0.0;
        for (x, &y) in batch.x.iter().zip(batch.y) {
            task += super::task_loss(&self.class_scores(x)?, y, cfg.loss)?;
        }
        let task = task / batch.len() as f64;
        let lambda = lambda_schedule(t, cfg);
        let commitment = commitment_loss(self);
        let fourier = if cfg.fourier_weight > 0.0 { fourier_loss(self) } else { 0.0 };
        Ok(LossParts { task, commitment, fourier, lambda, total: task + lambda * commitment + cfg.fourier_weight * fourier })
    }

    fn loss_and_grad(&self, batch: Batch<'_>, t: usize, cfg: &TrainConfig, grad: &mut [f64]) -> Result<LossParts> {
        grad.iter_mut().for_each(|g| *g = 0.0);
        let n = self.neuron_count();
        let n0 = self.input_dim();
        let offsets = self.act_offsets();
        let readout = *self.readout();
        let n_out = self.output_width();
        let group = readout.group_size(n_out);
        let coeffs = self.coeffs();
        let inv_b = 1.0 / batch.len() as f64;

        let mut z = vec![0.0; n];
        let mut h = vec![0.0; self.activation_len()];
        let mut delta = vec![0.0; self.activation_len()];
        let mut dscore = vec![0.0; readout.k];
        let mut task = 0.0;

        for (x, &y) in batch.x.iter().zip(batch.y) {
            self.check_input(x)?;
            self.forward_into(x, &mut z, &mut h);
            let scores = readout.scores(&h[h.len() - n_out..]);
            task += task_loss_grad(&scores, y, cfg.loss, &mut dscore)?;

            delta.iter_mut().for_each(|d| *d = 0.0);
            let out_start = h.len() - n_out;
            for (j, d) in delta[out_start..].iter_mut().enumerate() {
                *d = dscore[j / group] * inv_b / readout.tau;
            }

            for l in (1..offsets.len() - 1).rev() {
                let parents = self.connectivity().layer(l);
                let prev = offsets[l - 1];
                let first = offsets[l] - n0;
                for (j, p) in parents.iter().enumerate().rev() {
                    let idx = first + j;
                    let dz = delta[n0 + idx];
                    if dz == 0.0 || z[idx].abs() > 1.0 {
                        continue;
                    }
                    let (ia, ib) = (prev + p[0] as usize, prev + p[1] as usize);
                    let (a, b) = (h[ia], h[ib]);
                    let w = &coeffs[9 * idx..9 * idx + 9];
                    let m = monomials(a, b);
                    let g = &mut grad[9 * idx..9 * idx + 9];
                    for k in 0..9 {
                        g[k] += dz * m[k];
                    }
                    if l > 1 {
                        let ma = monomials_da(a, b);
                        let mb = monomials_db(a, b);
                        let mut da = 0.0;
                        let mut db = 0.0;
                        for k in 0..9 {
                            da += w[k] * ma[k];
                            db += w[k] * mb[k];
                        }
                        delta[ia] += dz * da;
                        delta[ib] += dz * db;
                    }
                }
            }
        }
        let task = task * inv_b;

        let lambda = lambda_schedule(t, cfg);
        let beta = cfg.fourier_weight;
        let mut commitment = 0.0;
        let mut fourier = 0.0;
        let inv_n = 1.0 / n as f64;
        for (idx, w) in self.neurons().enumerate() {
            let tbl = table_of(&w);
            let r = tbl.map(commitment_residual);
            commitment += r.iter().map(|v| v * v).sum::<f64>() / 9.0;
            let g = &mut grad[9 * idx..9 * idx + 9];
            if lambda > 0.0 {
                let scale = lambda * 2.0 / 9.0 * inv_n;
                for (i, ri) in r.iter().enumerate() {
                    if *ri != 0.0 {
                        for k in 0..9 {
                            g[k] += scale * ri * VANDERMONDE.v[i][k];
                        }
                    }
                }
            }
            if beta > 0.0 {
                let f = monomial_to_fourier(&w);
                fourier += f.l1();
                for (i, fi) in f.0.iter().enumerate() {
                    let s = sign(*fi);
                    if s != 0.0 {
                        for k in 0..9 {
                            g[k] += beta * inv_n * s * MONOMIAL_TO_FOURIER[i][k];
                        }
                    }
                }
            }
        }
        commitment *= inv_n;
        fourier *= inv_n;
        Ok(LossParts { task, commitment, fourier, lambda, total: task + lambda * commitment + beta * fourier })
    }
}

#[inline]
fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

impl Trainable for BinaryDlgnNetwork {
    fn params(&self) -> &[f64] {
        self.logits()
    }

    fn params_mut(&mut self) -> &mut [f64] {
        self.logits_mut()
    }

    fn loss(&self, batch: Batch<'_>, t: usize, cfg: &TrainConfig) -> Result<LossParts> {
        let mut task = 0.0;
        for (x, &y) in batch.x.iter().zip(batch.y) {
            task += super::task_loss(&self.class_scores(x)?, y, cfg.loss)?;
        }
        let task = task / batch.len() as f64;
        Ok(LossParts { task, lambda: lambda_schedule(t, cfg), total: task, ..LossParts::default() })
    }

    fn loss_and_grad(&self, batch: Batch<'_>, t: usize, cfg: &TrainConfig, grad: &mut [f64]) -> Result<LossParts> {
        let n0 = self.input_dim();
        let offsets = self.act_offsets();
        let readout = *self.readout();
        let n_out = *self.widths().last().unwrap();
        let group = readout.group_size(n_out);
        let inv_b = 1.0 / batch.len() as f64;
        let probs = self.probabilities();

        // Gradient with respect to each gate's probability, summed over the batch.
        let mut dprob = vec![0.0; probs.len()];
        let mut h = vec![0.0; self.activation_len()];
        let mut delta = vec![0.0; self.activation_len()];
        let mut dscore = vec![0.0; readout.k];
        let mut task = 0.0;

        for (x, &y) in batch.x.iter().zip(batch.y) {
            self.check_input(x)?;
            self.forward_into(x, &probs, &mut h);
            let scores = readout.scores(&h[h.len() - n_out..]);
            task += task_loss_grad(&scores, y, cfg.loss, &mut dscore)?;

            delta.iter_mut().for_each(|d| *d = 0.0);
            let out_start = h.len() - n_out;
            for (j, d) in delta[out_start..].iter_mut().enumerate() {
                *d = dscore[j / group] * inv_b / readout.tau;
            }
            for l in (1..offsets.len() - 1).rev() {
                let parents = self.connectivity().layer(l);
                let prev = offsets[l - 1];
                let first = offsets[l] - n0;
                for (j, p) in parents.iter().enumerate().rev() {
                    let idx = first + j;
                    let dy = delta[n0 + idx];
                    if dy == 0.0 {
                        continue;
                    }
                    let (ia, ib) = (prev + p[0] as usize, prev + p[1] as usize);
                    let (a, b) = (h[ia], h[ib]);
                    let g = gate_relaxations(a, b);
                    let dp = &mut dprob[16 * idx..16 * idx + 16];
                    for k in 0..16 {
                        dp[k] += dy * g[k];
                    }
                    if l > 1 {
                        let (ga, gb) = gate_relaxation_grads(a, b);
                        let pk = &probs[16 * idx..16 * idx + 16];
                        let mut da = 0.0;
                        let mut db = 0.0;
                        for k in 0..16 {
                            da += pk[k] * ga[k];
                            db += pk[k] * gb[k];
                        }
                        delta[ia] += dy * da;
                        delta[ib] += dy * db;
                    }
                }
            }
        }

        // Softmax Jacobian: ∂L/∂l_j = p_j (∂L/∂p_j − Σ_k p_k ∂L/∂p_k).
        for ((g, p), dp) in grad.chunks_exact_mut(16).zip(probs.chunks_exact(16)).zip(dprob.chunks_exact(16)) {
            let mean: f64 = p.iter().zip(dp).map(|(p, d)| p * d).sum();
            for k in 0..16 {
                g[k] = p[k] * (dp[k] - mean);
            }
        }
        let task = task * inv_b;
        Ok(LossParts { task, lambda: lambda_schedule(t, cfg), total: task, ..LossParts::default() })
    }
}
