//! Run configuration: a TOML or JSON file whose every field is optional,
//! overlaid by command-line flags and completed from the standard recipe.

use std::path::{Path, PathBuf};

use pst_core::data::{DatasetKind, ThresholdPlacement};
use pst_core::experiment::{Arch, Recipe};
use pst_core::training::LossKind;
use serde::{Deserialize, Serialize};

use crate::error::{PstError, Result};
use crate::formats::read_text;

const WHAT: &str = "config";

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DataSection {
    pub kind: Option<String>,
    pub n: Option<usize>,
    pub noise: Option<f64>,
    pub seed: Option<u64>,
    /// Mean separation for `gaussians`.
    pub sep: Option<f64>,
    pub test_fraction: Option<f64>,
    /// CSV files used instead of a generator.
    pub train: Option<PathBuf>,
    pub test: Option<PathBuf>,
    pub label: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NetworkSection {
    pub arch: Option<String>,
    pub body: Option<Vec<usize>>,
    pub output: Option<usize>,
    pub k: Option<usize>,
    pub tau: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EncoderSection {
    pub thresholds: Option<usize>,
    pub delta: Option<f64>,
    pub placement: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainSection {
    pub steps: Option<usize>,
    pub batch_size: Option<usize>,
    pub learning_rate: Option<f64>,
    pub lambda_max: Option<f64>,
    pub gamma: Option<f64>,
    pub fourier_weight: Option<f64>,
    pub loss: Option<String>,
    pub seed: Option<u64>,
    pub eval_every: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConfigFile {
    pub data: DataSection,
    pub network: NetworkSection,
    pub encoder: EncoderSection,
    pub train: TrainSection,
}

macro_rules! overlay {
    ($base:expr, $top:expr; $($f:ident),* $(,)?) => {
        $( if $top.$f.is_some() { $base.$f = $top.$f.clone(); } )*
    };
}

fn parse_with<T>(what: &'static str, field: &str, value: &str, f: impl FnOnce(&str) -> Option<T>) -> Result<T> {
    f(value).ok_or_else(|| PstError::field(what, field, format!("unrecognised value `{value}`")))
}

impl ConfigFile {
    /// Values set in `top` replace those in `self`.
    pub fn overlay(mut self, top: &ConfigFile) -> ConfigFile {
        overlay!(self.data, top.data; kind, n, noise, seed, sep, test_fraction, train, test, label);
        overlay!(self.network, top.network; arch, body, output, k, tau);
        overlay!(self.encoder, top.encoder; thresholds, delta, placement);
        overlay!(self.train, top.train; steps, batch_size, learning_rate, lambda_max, gamma, fourier_weight, loss, seed, eval_every);
        self
    }

    /// Read a `.toml` file, a `.json` file, or a run manifest (its `config`
    /// object).
    pub fn load(path: &Path) -> Result<ConfigFile> {
        let text = read_text(path)?;
        let is_json = path.extension().is_some_and(|e| e == "json") || text.trim_start().starts_with('{');
        if is_json {
            let value: serde_json::Value =
                serde_json::from_str(&text).map_err(|e| PstError::field(WHAT, "json", e))?;
            let value = match value.get("config") {
                Some(c) if value.get("format").is_some() => c.clone(),
                _ => value,
            };
            serde_path_to_error::deserialize(value)
                .map_err(|e| PstError::field(WHAT, e.path().to_string(), e.inner()))
        } else {
            let de = toml::Deserializer::parse(&text).map_err(|e| PstError::field(WHAT, "toml", e))?;
            serde_path_to_error::deserialize(de).map_err(|e| PstError::field(WHAT, e.path().to_string(), e.inner()))
        }
    }

    pub fn arch(&self) -> Result<Arch> {
        match &self.network.arch {
            None => Ok(Arch::Ternary),
            Some(a) => parse_with(WHAT, "network.arch", a, Arch::from_name),
        }
    }

    /// Complete the config from the standard recipe for its architecture.
    pub fn to_recipe(&self) -> Result<Recipe> {
        let arch = self.arch()?;
        let mut r = Recipe::standard(arch);
        let d = &self.data;
        let kind = d.kind.as_deref().unwrap_or("moons");
        r.dataset = DatasetKind::parse(kind, d.sep.unwrap_or(2.0)).map_err(|e| PstError::field(WHAT, "data.kind", e))?;
        r.noise = d.noise.unwrap_or_else(|| r.dataset.default_noise());
        overlay_value(&mut r.n, d.n);
        overlay_value(&mut r.data_seed, d.seed);
        overlay_value(&mut r.test_fraction, d.test_fraction);

        let n = &self.network;
        overlay_value(&mut r.body, n.body.clone());
        overlay_value(&mut r.output, n.output);
        overlay_value(&mut r.k, n.k);
        overlay_value(&mut r.tau, n.tau);

        let e = &self.encoder;
        overlay_value(&mut r.encoder.thresholds, e.thresholds);
        overlay_value(&mut r.encoder.delta, e.delta);
        if let Some(p) = &e.placement {
            r.encoder.placement = parse_with(WHAT, "encoder.placement", p, ThresholdPlacement::from_name)?;
        }

        let t = &self.train;
        let c = &mut r.train;
        overlay_value(&mut c.steps, t.steps);
        overlay_value(&mut c.batch_size, t.batch_size);
        overlay_value(&mut c.learning_rate, t.learning_rate);
        overlay_value(&mut c.lambda_max, t.lambda_max);
        overlay_value(&mut c.gamma, t.gamma);
        overlay_value(&mut c.fourier_weight, t.fourier_weight);
        overlay_value(&mut c.seed, t.seed);
        overlay_value(&mut c.eval_every, t.eval_every);
        if let Some(l) = &t.loss {
            c.loss = parse_with(WHAT, "train.loss", l, LossKind::from_name)?;
        }
        r.train.validate().map_err(PstError::Core)?;
        r.encoder.validate().map_err(PstError::Core)?;
        r.readout().map_err(PstError::Core)?;
        if r.body.is_empty() || r.body.contains(&0) {
            return Err(PstError::field(WHAT, "network.body", "hidden widths must be positive"));
        }
        Ok(r)
    }

    /// Fully populated config describing `recipe`, keeping CSV paths from
    /// `self`.
    pub fn effective(&self, recipe: &Recipe) -> ConfigFile {
        let sep = match recipe.dataset {
            DatasetKind::Gaussians { sep } => Some(sep),
            _ => None,
        };
        let t = &recipe.train;
        ConfigFile {
            data: DataSection {
                kind: Some(recipe.dataset.name().into()),
                n: Some(recipe.n),
                noise: Some(recipe.noise),
                seed: Some(recipe.data_seed),
                sep,
                test_fraction: Some(recipe.test_fraction),
                train: self.data.train.clone(),
                test: self.data.test.clone(),
                label: self.data.label.clone(),
            },
            network: NetworkSection {
                arch: Some(recipe.arch.name().into()),
                body: Some(recipe.body.clone()),
                output: Some(recipe.output),
                k: Some(recipe.k),
                tau: Some(recipe.tau),
            },
            encoder: EncoderSection {
                thresholds: Some(recipe.encoder.thresholds),
                delta: Some(recipe.encoder.delta),
                placement: Some(recipe.encoder.placement.name().into()),
            },
            train: TrainSection {
                steps: Some(t.steps),
                batch_size: Some(t.batch_size),
                learning_rate: Some(t.learning_rate),
                lambda_max: Some(t.lambda_max),
                gamma: Some(t.gamma),
                fourier_weight: Some(t.fourier_weight),
                loss: Some(t.loss.name().into()),
                seed: Some(t.seed),
                eval_every: Some(t.eval_every),
            },
        }
    }
}

fn overlay_value<T>(slot: &mut T, v: Option<T>) {
    if let Some(v) = v {
        *slot = v;
    }
}
