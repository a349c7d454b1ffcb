use alloc::vec::Vec;

use crate::algebra::Trit;
use crate::circuit::Circuit;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoveragePoint {
    /// Requested retention fraction.
    pub coverage: f64,
    pub retained: usize,
    /// Accuracy over the retained samples.
    pub accuracy: f64,
}

/// Accuracy after abstaining on the least confident samples. Points run
/// from the highest coverage to the lowest.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverageCurve {
    pub points: Vec<CoveragePoint>,
    /// Mean accuracy over the grid (reported negated in printed tables).
    pub auc: f64,
}

impl CoverageCurve {
    /// Accuracy at the grid point closest to `coverage`.
    pub fn accuracy_at(&self, coverage: f64) -> Option<f64> {
        self.points
            .iter()
            .min_by(|a, b| (a.coverage - coverage).abs().total_cmp(&(b.coverage - coverage).abs()))
            .map(|p| p.accuracy)
    }
}

/// `{0.05, 0.10, ..., 1.00}`.
pub fn default_retention_grid() -> Vec<f64> {
    (1..=20).map(|i| i as f64 / 20.0).collect()
}

/// Curve from per-sample margins and correctness. Samples are ranked by
/// margin, highest first, keeping the original order among equal margins;
/// a fraction `r` retains `⌈r n⌉` samples.
pub fn selective_curve_from(margins: &[f64], correct: &[bool], grid: &[f64]) -> Result<CoverageCurve> {
    if grid.is_empty() {
        return Err(Error::Empty("retention grid"));
    }
    if margins.is_empty() {
        return Err(Error::Empty("dataset"));
    }
    if margins.len() != correct.len() {
        return Err(Error::shape("margins and outcomes differ in length"));
    }
    if let Some(r) = grid.iter().find(|r| !(**r > 0.0 && **r <= 1.0)) {
        return Err(Error::range(alloc::format!("retention fraction {r} not in (0, 1]")));
    }
    let n = margins.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| margins[b].total_cmp(&margins[a]));
    // Prefix counts of correct predictions in ranked order.
    let mut prefix = Vec::with_capacity(n + 1);
    prefix.push(0usize);
    for &i in &order {
        prefix.push(prefix.last().unwrap() + correct[i] as usize);
    }
    let mut grid = grid.to_vec();
    grid.sort_by(|a, b| b.total_cmp(a));
    grid.dedup();
    let points: Vec<CoveragePoint> = grid
        .iter()
        .map(|&r| {
            let retained = (libm::ceil(r * n as f64 - 1e-9) as usize).clamp(1, n);
            CoveragePoint { coverage: r, retained, accuracy: prefix[retained] as f64 / retained as f64 }
        })
        .collect();
    let auc = points.iter().map(|p| p.accuracy).sum::<f64>() / points.len() as f64;
    Ok(CoverageCurve { points, auc })
}

/// Margin-ranked selective curve of a circuit on trit inputs.
pub fn selective_curve(circuit: &Circuit, x: &[Vec<Trit>], labels: &[usize], grid: &[f64]) -> Result<CoverageCurve> {
    if x.len() != labels.len() {
        return Err(Error::shape("inputs and labels differ in length"));
    }
    let mut margins = Vec::with_capacity(x.len());
    let mut correct = Vec::with_capacity(x.len());
    let mut buf = Vec::new();
    for (xi, &y) in x.iter().zip(labels) {
        let out = circuit.eval_with(xi, &mut buf)?;
        margins.push(out.margin);
        correct.push(out.class == y);
    }
    selective_curve_from(&margins, &correct, grid)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equal_margins_give_flat_curve() {
        let correct: Vec<bool> = (0..100).map(|i| i % 4 != 0).collect();
        let c = selective_curve_from(&[1.0; 100], &correct, &default_retention_grid()).unwrap();
        // Stable order keeps the 3-of-4 pattern in every prefix of multiples of 4.
        assert_eq!(c.points[0].accuracy, 0.75);
        let at_20 = c.points.iter().find(|p| p.coverage == 0.2).unwrap();
        assert_eq!(at_20.accuracy, 0.75);
    }

    #[test]
    fn calibrated_margins_are_perfect_on_the_correct_prefix() {
        let margins: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let correct: Vec<bool> = (0..10).map(|i| i >= 4).collect();
        let c = selective_curve_from(&margins, &correct, &[0.3, 0.6, 1.0]).unwrap();
        assert_eq!(c.points[0].accuracy, 0.6);
        assert_eq!(c.points[1].accuracy, 1.0);
        assert_eq!(c.points[2].accuracy, 1.0);
        assert_eq!(c.points[2].retained, 3);
        assert!((c.auc - (0.6 + 2.0) / 3.0).abs() < 1e-15);
        assert_eq!(c.accuracy_at(0.62), Some(1.0));
    }

    #[test]
    fn errors() {
        assert!(selective_curve_from(&[1.0], &[true], &[]).is_err());
        assert!(selective_curve_from(&[], &[], &[1.0]).is_err());
        assert!(selective_curve_from(&[1.0], &[true], &[1.5]).is_err());
    }
}
