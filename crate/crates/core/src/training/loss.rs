use crate::algebra::table_of;
use crate::fourier::monomial_to_fourier;
use crate::network::PstNetwork;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LossKind {
    /// Squared error against a one-hot target in score space.
    Mse,
    /// Softmax cross-entropy over the class scores.
    CrossEntropy,
}

impl LossKind {
    pub fn name(self) -> &'static str {
        match self {
            LossKind::Mse => "mse",
            LossKind::CrossEntropy => "cross_entropy",
        }
    }

    pub fn from_name(s: &str) -> Option<LossKind> {
        match s {
            "mse" => Some(LossKind::Mse),
            "cross_entropy" | "ce" => Some(LossKind::CrossEntropy),
            _ => None,
        }
    }
}

/// Distance from `x` to the nearest truth value.
#[inline]
pub fn dist_to_trits(x: f64) -> f64 {
    [-1.0, 0.0, 1.0].iter().map(|v| (x - v).abs()).fold(f64::INFINITY, f64::min)
}

/// Residual `x − v` whose square is `dist(x)²`, taking the lower neighbour
/// at the ±0.5 ties so its double is the left derivative.
#[inline]
pub(crate) fn commitment_residual(x: f64) -> f64 {
    let v = if x > 0.5 {
        1.0
    } else if x > -0.5 {
        0.0
    } else {
        -1.0
    };
    x - v
}

/// `(1/N) Σ_j (1/9) Σ dist(p_j(a,b), 𝒯)²` over the grid. Takes no data.
pub fn commitment_loss(net: &PstNetwork) -> f64 {
    let total: f64 = net
        .neurons()
        .map(|w| table_of(&w).iter().map(|&t| { let d = dist_to_trits(t); d * d }).sum::<f64>() / 9.0)
        .sum();
    total / net.neuron_count() as f64
}

/// Mean per-neuron Fourier L1 norm.
pub fn fourier_loss(net: &PstNetwork) -> f64 {
    let total: f64 = net.neurons().map(|w| monomial_to_fourier(&w).l1()).sum();
    total / net.neuron_count() as f64
}

pub fn task_loss(scores: &[f64], target: usize, kind: LossKind) -> Result<f64> {
    let mut g = [0.0; 0];
    task_loss_impl(scores, target, kind, &mut g[..], false)
}

/// Task loss and its gradient with respect to the scores.
pub fn task_loss_grad(scores: &[f64], target: usize, kind: LossKind, grad: &mut [f64]) -> Result<f64> {
    task_loss_impl(scores, target, kind, grad, true)
}

fn task_loss_impl(scores: &[f64], target: usize, kind: LossKind, grad: &mut [f64], want_grad: bool) -> Result<f64> {
    let k = scores.len();
    if target >= k {
        return Err(Error::range(alloc::format!("target class {target} >= {k}")));
    }
    match kind {
        LossKind::Mse => {
            let mut loss = 0.0;
            for (c, &s) in scores.iter().enumerate() {
                let d = s - if c == target { 1.0 } else { 0.0 };
                loss += d * d;
                if want_grad {
                    grad[c] = 2.0 * d / k as f64;
                }
            }
            Ok(loss / k as f64)
        }
        LossKind::CrossEntropy => {
            let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let sum: f64 = scores.iter().map(|s| libm::exp(s - max)).sum();
            let lse = max + libm::log(sum);
            if want_grad {
                for (c, &s) in scores.iter().enumerate() {
                    grad[c] = libm::exp(s - lse) - if c == target { 1.0 } else { 0.0 };
                }
            }
            Ok(lse - scores[target])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{coeffs_of_table, PolyCoeffs9};
    use crate::network::{ConnectivityMap, GroupSumConfig};

    fn one_neuron(w: PolyCoeffs9) -> PstNetwork {
        let map = ConnectivityMap::from_parts(alloc::vec![2, 2], alloc::vec![alloc::vec![[0, 1], [0, 1]]], 0).unwrap();
        PstNetwork::from_neurons(map, &[w, w], GroupSumConfig::new(2, 1.0).unwrap()).unwrap()
    }

    #[test]
    fn task_loss_examples() {
        assert_eq!(task_loss(&[1.0, 0.0], 0, LossKind::Mse).unwrap(), 0.0);
        assert!((task_loss(&[0.3, 0.3], 1, LossKind::CrossEntropy).unwrap() - core::f64::consts::LN_2).abs() < 1e-15);
        assert_eq!(task_loss(&[0.0, 1.0], 0, LossKind::Mse).unwrap(), 1.0);
        assert!(task_loss(&[0.0, 1.0], 2, LossKind::Mse).is_err());
    }

    #[test]
    fn task_gradients_match_differences() {
        let s = [0.3, -0.8, 1.4];
        for kind in [LossKind::Mse, LossKind::CrossEntropy] {
            let mut g = [0.0; 3];
            task_loss_grad(&s, 1, kind, &mut g).unwrap();
            for c in 0..3 {
                let (mut p, mut m) = (s, s);
                p[c] += 1e-6;
                m[c] -= 1e-6;
                let fd = (task_loss(&p, 1, kind).unwrap() - task_loss(&m, 1, kind).unwrap()) / 2e-6;
                assert!((fd - g[c]).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn commitment_examples() {
        let exact = coeffs_of_table(&crate::KleeneGate::Min.table().to_reals());
        assert_eq!(commitment_loss(&one_neuron(exact)), 0.0);
        let mut t = [0.0; 9];
        t[0] = 0.4;
        let loss = commitment_loss(&one_neuron(coeffs_of_table(&t)));
        assert!((loss - 0.16 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn residual_ties_take_the_lower_neighbour() {
        assert_eq!(commitment_residual(0.5), 0.5);
        assert_eq!(commitment_residual(-0.5), 0.5);
        assert_eq!(commitment_residual(0.51), 0.51 - 1.0);
        assert_eq!(commitment_residual(1.7), 1.7 - 1.0);
        assert_eq!(commitment_residual(-2.0), -1.0);
        for x in [-1.3, -0.7, -0.2, 0.0, 0.3, 0.9, 1.2] {
            assert!((commitment_residual(x).abs() - dist_to_trits(x)).abs() < 1e-15);
        }
    }

    #[test]
    fn fourier_loss_of_constant() {
        let mut w = PolyCoeffs9::ZERO;
        w.0[0] = 1.0;
        assert_eq!(fourier_loss(&one_neuron(w)), 1.0);
    }
}
