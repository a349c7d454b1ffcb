use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, Normal, StandardNormal};

use super::{Dataset, DatasetMeta};
use crate::rng::{stream, Stream};
use crate::{Error, Result};

/// Radius of both moons; the second moon is offset by `(R, R/2)`.
pub const MOONS_RADIUS: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DatasetKind {
    Moons,
    Circles,
    Spirals,
    /// Two unit-variance isotropic Gaussians whose means are `sep` apart.
    Gaussians { sep: f64 },
    RingSector,
}

impl DatasetKind {
    pub fn name(&self) -> &'static str {
        match self {
            DatasetKind::Moons => "moons",
            DatasetKind::Circles => "circles",
            DatasetKind::Spirals => "spirals",
            DatasetKind::Gaussians { .. } => "gaussians",
            DatasetKind::RingSector => "ring_sector",
        }
    }

    /// Parse a kind name; `sep` is only used by `gaussians`.
    pub fn parse(name: &str, sep: f64) -> Result<DatasetKind> {
        match name {
            "moons" => Ok(DatasetKind::Moons),
            "circles" => Ok(DatasetKind::Circles),
            "spirals" => Ok(DatasetKind::Spirals),
            "gaussians" => Ok(DatasetKind::Gaussians { sep }),
            "ring_sector" | "ring-sector" => Ok(DatasetKind::RingSector),
            other => Err(Error::config(alloc::format!("unknown dataset kind '{other}'"))),
        }
    }

    /// Noise level used when none is given.
    pub fn default_noise(&self) -> f64 {
        match self {
            DatasetKind::Moons => 0.5,
            DatasetKind::Circles => 0.1,
            DatasetKind::Spirals => 0.2,
            DatasetKind::Gaussians { .. } => 1.0,
            DatasetKind::RingSector => 0.1,
        }
    }
}

/// Balanced two-class sample of size `n`. Gaussians ignore `noise` (their
/// spread is fixed at one standard deviation).
pub fn gen_dataset(kind: DatasetKind, n: usize, noise: f64, seed: u64) -> Result<Dataset> {
    if n < 2 {
        return Err(Error::config(alloc::format!("need at least 2 samples, got {n}")));
    }
    if !(noise >= 0.0 && noise.is_finite()) {
        return Err(Error::config(alloc::format!("noise must be >= 0, got {noise}")));
    }
    if let DatasetKind::Gaussians { sep } = kind {
        if !(sep >= 0.0 && sep.is_finite()) {
            return Err(Error::config(alloc::format!("separation must be >= 0, got {sep}")));
        }
    }
    let mut rng = stream(seed, Stream::Data);
    let jitter = Normal::new(0.0, noise).map_err(|_| Error::config("invalid noise"))?;
    let n0 = n.div_ceil(2);
    let mut features = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for i in 0..n {
        let (class, j, m) = if i < n0 { (0, i, n0) } else { (1, i - n0, n - n0) };
        // Position along the class's curve in [0, 1].
        let s = if m > 1 { j as f64 / (m - 1) as f64 } else { 0.5 };
        let [x, y] = match kind {
            DatasetKind::Moons => moon_point(class, s * PI),
            DatasetKind::Circles => {
                let theta = rng.random_range(0.0..2.0 * PI);
                let r = if class == 0 { 1.0 } else { 0.5 };
                [r * libm::cos(theta), r * libm::sin(theta)]
            }
            DatasetKind::Spirals => {
                let t = s.max(0.02);
                let theta = 3.0 * PI * t + class as f64 * PI;
                [t * libm::cos(theta), t * libm::sin(theta)]
            }
            DatasetKind::Gaussians { sep } => {
                let mx = if class == 0 { -sep / 2.0 } else { sep / 2.0 };
                let dx: f64 = StandardNormal.sample(&mut rng);
                let dy: f64 = StandardNormal.sample(&mut rng);
                [mx + dx, dy]
            }
            DatasetKind::RingSector => {
                // Quadrants 0 and 2 belong to class 0, quadrants 1 and 3 to class 1.
                let quadrant = 2 * rng.random_range(0..2usize) + class;
                let theta = (quadrant as f64 + rng.random_range(0.0..1.0)) * PI / 2.0;
                let r = libm::sqrt(rng.random_range(1.0..4.0));
                [r * libm::cos(theta), r * libm::sin(theta)]
            }
        };
        let (ex, ey) = match kind {
            DatasetKind::Gaussians { .. } => (0.0, 0.0),
            _ => (jitter.sample(&mut rng), jitter.sample(&mut rng)),
        };
        features.push(alloc::vec![x + ex, y + ey]);
        labels.push(class);
    }
    let params = match kind {
        DatasetKind::Gaussians { sep } => alloc::format!("sep={sep}"),
        DatasetKind::Moons => alloc::format!("radius={MOONS_RADIUS}"),
        _ => String::new(),
    };
    Dataset::new(
        features,
        labels,
        2,
        DatasetMeta { kind: String::from(kind.name()), params, noise, seed, source: String::from("generated") },
    )
}

fn moon_point(class: usize, theta: f64) -> [f64; 2] {
    let r = MOONS_RADIUS;
    if class == 0 {
        [r * libm::cos(theta), r * libm::sin(theta)]
    } else {
        [r - r * libm::cos(theta), r / 2.0 - r * libm::sin(theta)]
    }
}

/// Class of the nearer noiseless moon arc; exact on noiseless samples.
pub fn moons_generating_rule(p: &[f64]) -> usize {
    let arc_dist = |class: usize| -> f64 {
        let (cx, cy, sign) = if class == 0 { (0.0, 0.0, 1.0) } else { (MOONS_RADIUS, MOONS_RADIUS / 2.0, -1.0) };
        let (dx, dy) = (p[0] - cx, p[1] - cy);
        let mut theta = libm::atan2(sign * dy, sign * dx);
        // Nearest point of the half circle: clamp the angle to its span.
        if theta < 0.0 {
            theta = if theta < -PI / 2.0 { PI } else { 0.0 };
        }
        let [qx, qy] = moon_point(class, theta);
        libm::hypot(p[0] - qx, p[1] - qy)
    };
    (arc_dist(1) < arc_dist(0)) as usize
}

/// Bayes accuracy of two unit-variance Gaussians `sep` apart: `Φ(sep/2)`.
pub fn bayes_accuracy_gaussians(sep: f64) -> f64 {
    0.5 * (1.0 + libm::erf(sep / 2.0 / core::f64::consts::SQRT_2))
}
