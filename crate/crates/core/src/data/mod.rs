//! Datasets, synthetic generators and threshold encoders.

mod encoding;
mod generators;

pub use encoding::{EncodedSet, Encoder, EncoderConfig, EncodingMode, ThresholdPlacement};
pub use generators::{bayes_accuracy_gaussians, gen_dataset, moons_generating_rule, DatasetKind, MOONS_RADIUS};

use alloc::string::String;
use alloc::vec::Vec;

use rand::seq::SliceRandom;

use crate::rng::{stream, Stream};
use crate::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct DatasetMeta {
    pub kind: String,
    /// Generator parameters as `key=value` text.
    pub params: String,
    pub noise: f64,
    pub seed: u64,
    /// `generated` or the file the samples were read from.
    pub source: String,
}

/// Real-valued samples with class labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    features: Vec<Vec<f64>>,
    labels: Vec<usize>,
    classes: usize,
    pub meta: DatasetMeta,
}

impl Dataset {
    pub fn new(features: Vec<Vec<f64>>, labels: Vec<usize>, classes: usize, meta: DatasetMeta) -> Result<Dataset> {
        if features.is_empty() {
            return Err(Error::Empty("dataset"));
        }
        if features.len() != labels.len() {
            return Err(Error::shape(alloc::format!("{} samples but {} labels", features.len(), labels.len())));
        }
        let d = features[0].len();
        if d == 0 {
            return Err(Error::shape("samples have no features"));
        }
        if let Some(i) = features.iter().position(|x| x.len() != d) {
            return Err(Error::shape(alloc::format!("sample {i} has {} features, expected {d}", features[i].len())));
        }
        if let Some(i) = features.iter().position(|x| x.iter().any(|v| !v.is_finite())) {
            return Err(Error::range(alloc::format!("sample {i} has a non-finite feature")));
        }
        if classes < 2 {
            return Err(Error::config(alloc::format!("need at least 2 classes, got {classes}")));
        }
        if let Some(i) = labels.iter().position(|&y| y >= classes) {
            return Err(Error::range(alloc::format!("label {} of sample {i} >= {classes}", labels[i])));
        }
        Ok(Dataset { features, labels, classes, meta })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.features[0].len()
    }

    pub fn classes(&self) -> usize {
        self.classes
    }

    pub fn features(&self) -> &[Vec<f64>] {
        &self.features
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn subset(&self, idx: &[usize]) -> Result<Dataset> {
        Dataset::new(
            idx.iter().map(|&i| self.features[i].clone()).collect(),
            idx.iter().map(|&i| self.labels[i]).collect(),
            self.classes,
            self.meta.clone(),
        )
    }

    /// Seeded disjoint train/test partition; the test part holds
    /// `round(n · test_fraction)` samples.
    pub fn split(&self, test_fraction: f64, seed: u64) -> Result<(Dataset, Dataset)> {
        if !(test_fraction > 0.0 && test_fraction < 1.0) {
            return Err(Error::config(alloc::format!("test fraction {test_fraction} not in (0, 1)")));
        }
        let n = self.len();
        let n_test = libm::round(n as f64 * test_fraction) as usize;
        if n_test == 0 || n_test == n {
            return Err(Error::config(alloc::format!("split of {n} samples leaves an empty side")));
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut stream(seed, Stream::Split));
        let (test, train) = order.split_at(n_test);
        let mut train = train.to_vec();
        let mut test = test.to_vec();
        train.sort_unstable();
        test.sort_unstable();
        Ok((self.subset(&train)?, self.subset(&test)?))
    }
}
