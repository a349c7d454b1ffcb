//! The `pst` subcommands. Each writes its artifacts and a manifest into an
//! output directory and prints a short summary to stdout.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use pst_core::analysis::{
    delta_sweep, diversity_report, resolution_sweep, selective_curve, separation_sweep, spectral_profile,
    default_retention_grid,
};
use pst_core::circuit::{score_circuit, Provenance};
use pst_core::data::{Dataset, Encoder};
use pst_core::experiment::{encode_splits, recipe_data, Recipe, TrainedModel};
use pst_core::training::TrainData;

use crate::bench::bench;
use crate::config::ConfigFile;
use crate::error::{PstError, Result};
use crate::formats::checkpoint::{parse_checkpoint, render_checkpoint, Checkpoint};
use crate::formats::circuit::{parse_circuit, render_circuit, CircuitFile};
use crate::formats::dataset::{load_csv, render_dataset, CsvSchema, LabelColumn};
use crate::formats::history::render_history;
use crate::formats::report::{
    delta_table, diversity_table, gap_table, resolution_table, selective_table, separation_table, spectral_gates_table,
    spectral_table, Table,
};
use crate::formats::{read_text, sha256_hex};
use crate::manifest::{Manifest, MANIFEST_FILE};

pub const CHECKPOINT_FILE: &str = "checkpoint.pst";
pub const HISTORY_FILE: &str = "history.jsonl";
pub const CIRCUIT_FILE: &str = "circuit.pst";

const KINDS: [&str; 6] = ["moons", "circles", "spirals", "gaussians", "ring_sector", "ring-sector"];

#[derive(Debug, Parser)]
#[command(name = "pst", version, about = "Polynomial surrogate training for ternary logic gate networks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a synthetic dataset as train and test CSV files.
    GenData(GenDataArgs),
    /// Train a ternary or binary network; writes a checkpoint and history.
    Train(TrainArgs),
    /// Harden a checkpoint into a circuit and report the hardening gap.
    Harden(HardenArgs),
    /// Score a circuit: accuracy, abstention, selective prediction, gate statistics.
    Eval(EvalArgs),
    /// Separation, threshold-band or resolution sweep.
    Sweep(SweepArgs),
    /// Per-step training time of both architectures at matched widths.
    Bench(BenchArgs),
}

/// Root for default output directories.
pub const OUT_DIR_ENV: &str = "PST_OUT_DIR";

#[derive(Debug, Clone, Args)]
pub struct OutArgs {
    /// Output directory [default: $PST_OUT_DIR/<command>, else pst-out/<command>]
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Overwrite existing outputs.
    #[arg(long)]
    pub force: bool,
}

#[derive(Debug, Clone, Default, Args)]
pub struct RecipeArgs {
    /// TOML/JSON config or a previous run's manifest; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Generator name (see `gen-data --kind`).
    #[arg(long, value_parser = KINDS)]
    pub dataset: Option<String>,
    /// Samples before the train/test split.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub noise: Option<f64>,
    #[arg(long)]
    pub data_seed: Option<u64>,
    /// Mean separation for `gaussians`.
    #[arg(long)]
    pub sep: Option<f64>,
    #[arg(long)]
    pub test_fraction: Option<f64>,
    /// Training CSV instead of a generator.
    #[arg(long)]
    pub train: Option<PathBuf>,
    /// Test CSV; without it the training CSV is split.
    #[arg(long)]
    pub test: Option<PathBuf>,
    /// Label column name (default: `label`, else the last column).
    #[arg(long)]
    pub label: Option<String>,
    #[arg(long, value_parser = ["ternary", "binary"])]
    pub arch: Option<String>,
    /// Hidden widths, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub body: Option<Vec<usize>>,
    /// Output layer width.
    #[arg(long)]
    pub output: Option<usize>,
    /// Classes in the readout.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub tau: Option<f64>,
    /// Thresholds per feature.
    #[arg(long)]
    pub thresholds: Option<usize>,
    /// UNKNOWN band width as a fraction of the threshold spacing.
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long, value_parser = ["uniform", "quantile"])]
    pub placement: Option<String>,
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long)]
    pub batch_size: Option<usize>,
    #[arg(long)]
    pub lr: Option<f64>,
    #[arg(long)]
    pub lambda_max: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Fourier L1 weight.
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long, value_parser = ["mse", "cross_entropy", "ce"])]
    pub loss: Option<String>,
    /// Seeds connectivity, initial parameters and batch order.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub eval_every: Option<usize>,
}

impl RecipeArgs {
    fn flags(&self) -> ConfigFile {
        let mut c = ConfigFile::default();
        c.data.kind = self.dataset.clone();
        c.data.n = self.n;
        c.data.noise = self.noise;
        c.data.seed = self.data_seed;
        c.data.sep = self.sep;
        c.data.test_fraction = self.test_fraction;
        c.data.train = self.train.clone();
        c.data.test = self.test.clone();
        c.data.label = self.label.clone();
        c.network.arch = self.arch.clone();
        c.network.body = self.body.clone();
        c.network.output = self.output;
        c.network.k = self.k;
        c.network.tau = self.tau;
        c.encoder.thresholds = self.thresholds;
        c.encoder.delta = self.delta;
        c.encoder.placement = self.placement.clone();
        c.train.steps = self.steps;
        c.train.batch_size = self.batch_size;
        c.train.learning_rate = self.lr;
        c.train.lambda_max = self.lambda_max;
        c.train.gamma = self.gamma;
        c.train.fourier_weight = self.beta;
        c.train.loss = self.loss.clone();
        c.train.seed = self.seed;
        c.train.eval_every = self.eval_every;
        c
    }

    /// Flags over config file over defaults.
    pub fn resolve(&self) -> Result<(ConfigFile, Recipe)> {
        let base = match &self.config {
            Some(p) => ConfigFile::load(p)?,
            None => ConfigFile::default(),
        };
        let cfg = base.overlay(&self.flags());
        let recipe = cfg.to_recipe()?;
        Ok((cfg, recipe))
    }
}

#[derive(Debug, Clone, Args)]
pub struct GenDataArgs {
    #[arg(long, value_parser = KINDS, default_value = "moons")]
    pub kind: String,
    #[arg(long, default_value_t = 2500)]
    pub n: usize,
    /// Defaults per kind (0.5 for moons).
    #[arg(long)]
    pub noise: Option<f64>,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 2.0)]
    pub sep: f64,
    #[arg(long, default_value_t = 0.2)]
    pub test_fraction: f64,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Clone, Args)]
pub struct TrainArgs {
    #[command(flatten)]
    pub recipe: RecipeArgs,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Clone, Args)]
pub struct DataArgs {
    /// Labelled CSV to score on; defaults to the test split recorded in the
    /// manifest next to the input file.
    #[arg(long)]
    pub data: Option<PathBuf>,
    #[arg(long)]
    pub label: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct HardenArgs {
    #[arg(long)]
    pub checkpoint: PathBuf,
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Clone, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub circuit: Option<PathBuf>,
    #[command(flatten)]
    pub data: DataArgs,
    /// Accuracy over the most confident fraction of samples.
    #[arg(long)]
    pub selective: bool,
    /// Retention fractions for `--selective`, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub retention: Option<Vec<f64>>,
    /// Gate usage statistics.
    #[arg(long)]
    pub diversity: bool,
    /// Fourier band energies of the unique gates.
    #[arg(long)]
    pub spectral: bool,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepKind {
    Separation,
    Delta,
    Resolution,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[arg(long = "kind", value_enum)]
    pub sweep: SweepKind,
    /// Separations or band widths, comma separated.
    #[arg(long, alias = "seps", value_delimiter = ',')]
    pub values: Option<Vec<f64>>,
    /// Bins per feature for the resolution sweep.
    #[arg(long = "K", value_delimiter = ',')]
    pub resolutions: Option<Vec<usize>>,
    /// Training seeds for the band sweep.
    #[arg(long, value_delimiter = ',')]
    pub seeds: Option<Vec<u64>>,
    /// Also train the binary baseline in the separation sweep.
    #[arg(long)]
    pub with_binary: bool,
    /// Keep the configured body widths at every resolution.
    #[arg(long)]
    pub fixed_widths: bool,
    #[command(flatten)]
    pub recipe: RecipeArgs,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    /// Untimed steps before measuring.
    #[arg(long, default_value_t = 5)]
    pub warmup: usize,
    /// Timed steps per architecture (overrides `--steps`).
    #[arg(long)]
    pub timed: Option<usize>,
    #[command(flatten)]
    pub recipe: RecipeArgs,
    #[command(flatten)]
    pub out: OutArgs,
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::GenData(a) => gen_data(&a),
        Command::Train(a) => train(&a),
        Command::Harden(a) => harden(&a),
        Command::Eval(a) => eval(&a),
        Command::Sweep(a) => sweep(&a),
        Command::Bench(a) => bench_cmd(&a),
    }
}

impl OutArgs {
    pub fn dir(&self, command: &str) -> PathBuf {
        match &self.out {
            Some(p) => p.clone(),
            None => std::env::var_os(OUT_DIR_ENV).map_or_else(|| PathBuf::from("pst-out"), PathBuf::from).join(command),
        }
    }
}

/// Output directory for `command`, refusing to overwrite `files` unless
/// forced.
fn claim_outputs(out: &OutArgs, command: &str, files: &[&str]) -> Result<PathBuf> {
    let dir = out.dir(command);
    if !out.force {
        for f in files.iter().chain([&MANIFEST_FILE]) {
            let p = dir.join(f);
            if p.exists() {
                return Err(PstError::usage(format!("{} exists; pass --force to overwrite", p.display())));
            }
        }
    }
    std::fs::create_dir_all(&dir).map_err(|e| PstError::io(&dir, e))?;
    Ok(dir)
}

fn schema(label: &Option<String>) -> CsvSchema {
    CsvSchema { label: label.clone().map_or(LabelColumn::Auto, LabelColumn::Name), classes: None }
}

/// Train and test splits described by a config: CSV files when given,
/// otherwise the generator.
pub fn load_splits(cfg: &ConfigFile, recipe: &Recipe) -> Result<(Dataset, Dataset)> {
    let schema = schema(&cfg.data.label);
    match (&cfg.data.train, &cfg.data.test) {
        (Some(train), Some(test)) => Ok((load_csv(train, &schema)?, load_csv(test, &schema)?)),
        (Some(train), None) => Ok(load_csv(train, &schema)?.split(recipe.test_fraction, recipe.data_seed)?),
        (None, Some(_)) => Err(PstError::usage("--test needs --train")),
        (None, None) => Ok(recipe_data(recipe)?),
    }
}

/// `--data` if given, else the test split of the config in the manifest
/// beside `artifact`.
fn scoring_data(args: &DataArgs, artifact: &Path) -> Result<Dataset> {
    if let Some(p) = &args.data {
        return load_csv(p, &schema(&args.label));
    }
    let manifest = artifact.parent().unwrap_or(Path::new(".")).join(MANIFEST_FILE);
    let cfg = match Manifest::load(&manifest) {
        Ok(Manifest { config: Some(c), .. }) => c,
        _ => return Err(PstError::usage(format!("no --data given and no run config found in {}", manifest.display()))),
    };
    let recipe = cfg.to_recipe()?;
    Ok(load_splits(&cfg, &recipe)?.1)
}

fn require_encoder<'a>(enc: &'a Option<Encoder>, what: &Path) -> Result<&'a Encoder> {
    enc.as_ref().ok_or_else(|| PstError::usage(format!("{} carries no encoder; cannot encode raw data", what.display())))
}

fn pct(x: f64) -> String {
    format!("{:.2}%", 100.0 * x)
}

pub fn gen_data(a: &GenDataArgs) -> Result<()> {
    let mut cfg = ConfigFile::default();
    cfg.data.kind = Some(a.kind.clone());
    cfg.data.n = Some(a.n);
    cfg.data.noise = a.noise;
    cfg.data.seed = Some(a.seed);
    cfg.data.sep = Some(a.sep);
    cfg.data.test_fraction = Some(a.test_fraction);
    let recipe = cfg.to_recipe()?;
    let dir = claim_outputs(&a.out, "gen-data", &["train.csv", "test.csv"])?;
    let mut m = Manifest::new("gen-data");
    m.seed("data", recipe.data_seed);
    let (train, test) = m.time("generate", || recipe_data(&recipe))?;
    m.write_artifact(&dir, "train.csv", &render_dataset(&train, "train"))?;
    m.write_artifact(&dir, "test.csv", &render_dataset(&test, "test"))?;
    m.result("train_samples", train.len());
    m.result("test_samples", test.len());
    let eff = cfg.effective(&recipe);
    m.config = Some(ConfigFile { data: eff.data, ..ConfigFile::default() });
    m.save(&dir)?;
    println!("{}: {} train / {} test samples -> {}", recipe.dataset.name(), train.len(), test.len(), dir.display());
    Ok(())
}

pub fn train(a: &TrainArgs) -> Result<()> {
    let (cfg, recipe) = a.recipe.resolve()?;
    let dir = claim_outputs(&a.out, "train", &[CHECKPOINT_FILE, HISTORY_FILE])?;
    let mut m = Manifest::new("train");
    m.config = Some(cfg.effective(&recipe));
    m.seed("data", recipe.data_seed);
    m.seed("train", recipe.train.seed);
    let (train_ds, test_ds) = m.time("data", || load_splits(&cfg, &recipe))?;
    let (encoder, train_set, test_set) = m.time("encode", || encode_splits(&recipe, &train_ds, &test_ds))?;
    let init = TrainedModel::init(&recipe, encoder.output_dim())?;
    let data = TrainData { x: &train_set.soft, y: &train_set.labels, eval: Some((&test_set.soft, &test_set.labels)) };
    let (model, history) = m.time("train", || init.train(data, &recipe.train))?;
    let soft_acc = model.soft_accuracy(&test_set)?;
    let ck = Checkpoint { model, encoder: Some(encoder), steps_trained: recipe.train.steps };
    m.write_artifact(&dir, CHECKPOINT_FILE, &render_checkpoint(&ck)?)?;
    m.write_artifact(&dir, HISTORY_FILE, &render_history(&history))?;
    m.result("arch", recipe.arch.name());
    m.result("steps", recipe.train.steps);
    m.result("lambda_max", recipe.train.lambda_max);
    m.result("gamma", recipe.train.gamma);
    m.result("test_soft_accuracy", soft_acc);
    if let Some(last) = history.steps.last() {
        m.result("final_task_loss", last.task_loss);
        m.result("final_commitment_loss", last.commitment_loss);
    }
    m.save(&dir)?;
    println!(
        "{} {:?} trained {} steps: test soft accuracy {} -> {}",
        recipe.arch.name(),
        recipe.widths(),
        recipe.train.steps,
        pct(soft_acc),
        dir.join(CHECKPOINT_FILE).display()
    );
    Ok(())
}

pub fn harden(a: &HardenArgs) -> Result<()> {
    let text = read_text(&a.checkpoint)?;
    let ck = parse_checkpoint(&text)?;
    let data = scoring_data(&a.data, &a.checkpoint)?;
    let dir = claim_outputs(&a.out, "harden", &[CIRCUIT_FILE, "gap.tsv"])?;
    let mut m = Manifest::new("harden");
    if let Ok(Manifest { config: Some(c), .. }) = Manifest::load(&a.checkpoint.parent().unwrap_or(Path::new(".")).join(MANIFEST_FILE)) {
        m.config = Some(c);
    }
    let mut circuit = m.time("harden", || ck.model.harden())?;
    circuit.provenance = Provenance { source_hash: sha256_hex(text.as_bytes()), hardened_at: format!("step {}", ck.steps_trained) };
    let encoder = require_encoder(&ck.encoder, &a.checkpoint)?;
    let set = encoder.encode_set(&data)?;
    let gap = m.time("gap", || ck.model.gap(&circuit, &set))?;
    let cf = CircuitFile { circuit, encoder: ck.encoder.clone() };
    m.write_artifact(&dir, CIRCUIT_FILE, &render_circuit(&cf)?)?;
    m.write_artifact(&dir, "gap.tsv", &gap_table(&gap).render())?;
    m.artifacts.insert("source:checkpoint".into(), sha256_hex(text.as_bytes()));
    m.result("soft_accuracy", gap.soft_accuracy);
    m.result("circuit_accuracy", gap.circuit_accuracy);
    m.result("gap_pp", gap.gap_pp);
    m.result("unknown_fraction", gap.unknown_fraction);
    if let Some(h) = gap.hardening_error {
        m.result("hardening_error", h);
    }
    m.save(&dir)?;
    println!(
        "soft {} circuit {} gap {:.2}pp UNKNOWN {} ({} samples)",
        pct(gap.soft_accuracy),
        pct(gap.circuit_accuracy),
        gap.gap_pp,
        pct(gap.unknown_fraction),
        gap.samples
    );
    Ok(())
}

pub fn eval(a: &EvalArgs) -> Result<()> {
    let path = a.circuit.as_ref().ok_or_else(|| PstError::usage("--circuit is required"))?;
    if !path.exists() {
        return Err(PstError::usage(format!("circuit file {} not found", path.display())));
    }
    let text = read_text(path)?;
    let CircuitFile { circuit, encoder } = parse_circuit(&text)?;
    let wants_data = a.selective || a.data.data.is_some() || !(a.diversity || a.spectral);
    let set = if wants_data {
        let data = scoring_data(&a.data, path)?;
        Some(require_encoder(&encoder, path)?.encode_set(&data)?)
    } else {
        None
    };
    let mut files = vec![];
    if set.is_some() {
        files.push("metrics.tsv");
    }
    if a.selective {
        files.push("selective.tsv");
    }
    if a.diversity {
        files.push("diversity.tsv");
    }
    if a.spectral {
        files.extend(["spectral.tsv", "spectral_gates.tsv"]);
    }
    let dir = claim_outputs(&a.out, "eval", &files)?;
    let mut m = Manifest::new("eval");
    m.artifacts.insert("source:circuit".into(), sha256_hex(text.as_bytes()));
    let mut summary = String::new();
    if let Some(set) = &set {
        let s = m.time("score", || score_circuit(&circuit, &set.hard, &set.labels))?;
        let mut t = Table::new("metrics", &["samples", "accuracy_pct", "unk_pct"])
            .note("accuracy = argmax of circuit scores, lowest class on ties; unk = share of output trits equal to 0");
        t.push(vec![s.samples.to_string(), format!("{:.2}", 100.0 * s.accuracy), format!("{:.2}", 100.0 * s.unknown_fraction)]);
        m.write_artifact(&dir, "metrics.tsv", &t.render())?;
        m.result("accuracy", s.accuracy);
        m.result("unknown_fraction", s.unknown_fraction);
        let _ = writeln!(summary, "accuracy {} UNKNOWN {} ({} samples)", pct(s.accuracy), pct(s.unknown_fraction), s.samples);
        if a.selective {
            let grid = a.retention.clone().unwrap_or_else(default_retention_grid);
            let curve = m.time("selective", || selective_curve(&circuit, &set.hard, &set.labels, &grid))?;
            m.write_artifact(&dir, "selective.tsv", &selective_table(&curve).render())?;
            m.result("selective_auc", curve.auc);
            if let Some(acc) = curve.accuracy_at(0.5) {
                m.result("acc_at_50", acc);
                let _ = writeln!(summary, "Acc@50% {}", pct(acc));
            }
        }
    }
    if a.diversity {
        let d = diversity_report(&circuit);
        m.write_artifact(&dir, "diversity.tsv", &diversity_table(&d).render())?;
        m.result("unique_gates", d.unique);
        let _ = writeln!(summary, "{} neurons, {} unique gates, effective diversity {:.1}", d.neurons, d.unique, d.effective_diversity);
    }
    if a.spectral {
        let p = spectral_profile(&circuit);
        m.write_artifact(&dir, "spectral.tsv", &spectral_table(&p).render())?;
        m.write_artifact(&dir, "spectral_gates.tsv", &spectral_gates_table(&p).render())?;
        m.result("ternary_fraction", p.ternary_fraction);
        let _ = writeln!(summary, "{} of unique gates use UNKNOWN", pct(p.ternary_fraction));
    }
    m.save(&dir)?;
    print!("{summary}");
    Ok(())
}

pub fn sweep(a: &SweepArgs) -> Result<()> {
    let (cfg, recipe) = a.recipe.resolve()?;
    if cfg.data.train.is_some() {
        return Err(PstError::usage("sweeps use generated data; drop --train/--test"));
    }
    let name = match a.sweep {
        SweepKind::Separation => "separation",
        SweepKind::Delta => "delta",
        SweepKind::Resolution => "resolution",
    };
    let file = format!("{name}.tsv");
    let dir = claim_outputs(&a.out, "sweep", &[&file])?;
    let mut m = Manifest::new("sweep");
    m.config = Some(cfg.effective(&recipe));
    m.seed("data", recipe.data_seed);
    m.seed("train", recipe.train.seed);
    let table = match a.sweep {
        SweepKind::Separation => {
            let seps = a.values.clone().unwrap_or_else(|| vec![0.5, 1.0, 1.5, 2.0, 2.5, 3.0]);
            let rows = m.time("sweep", || separation_sweep(&seps, &recipe, a.with_binary));
            separation_table(&rows)
        }
        SweepKind::Delta => {
            let deltas = a.values.clone().unwrap_or_else(|| vec![1.0, 0.5, 0.25, 0.0]);
            let seeds = a.seeds.clone().unwrap_or_else(|| vec![recipe.train.seed]);
            for (i, s) in seeds.iter().enumerate() {
                m.seed(&format!("train.{i}"), *s);
            }
            let rows = m.time("sweep", || delta_sweep(&deltas, &seeds, &recipe));
            delta_table(&rows)
        }
        SweepKind::Resolution => {
            let ks = a.resolutions.clone().unwrap_or_else(|| vec![2, 4, 8, 16]);
            if ks.iter().any(|&k| k < 2) {
                return Err(PstError::usage("resolution needs at least 2 bins per feature"));
            }
            let rows = m.time("sweep", || resolution_sweep(&ks, &recipe, !a.fixed_widths));
            resolution_table(&rows)
        }
    };
    let rendered = table.render();
    m.write_artifact(&dir, &file, &rendered)?;
    m.save(&dir)?;
    print!("{rendered}");
    Ok(())
}

pub fn bench_cmd(a: &BenchArgs) -> Result<()> {
    let (cfg, recipe) = a.recipe.resolve()?;
    if cfg.data.train.is_some() {
        return Err(PstError::usage("bench uses generated data; drop --train/--test"));
    }
    let timed = a.timed.or(a.recipe.steps).unwrap_or(50);
    let dir = claim_outputs(&a.out, "bench", &["bench.tsv"])?;
    let mut m = Manifest::new("bench");
    m.config = Some(cfg.effective(&recipe));
    m.seed("train", recipe.train.seed);
    let rep = bench(&recipe, a.warmup, timed)?;
    let mut t = Table::new("bench", &["arch", "params", "median_ms", "mean_ms", "min_ms"])
        .note(format!("widths {:?}; {} warmup steps excluded; {} timed steps", rep.widths, rep.warmup, rep.steps))
        .note(format!("ratio binary/ternary (median) = {:.3}", rep.ratio));
    if let Some(w) = &rep.warning {
        t = t.note(format!("warning: {w}"));
    }
    for r in [&rep.ternary, &rep.binary] {
        t.push(vec![
            r.arch.name().into(),
            r.params.to_string(),
            format!("{:.4}", r.median_ms),
            format!("{:.4}", r.mean_ms),
            format!("{:.4}", r.min_ms),
        ]);
    }
    m.write_artifact(&dir, "bench.tsv", &t.render())?;
    m.result("warmup_steps", rep.warmup);
    m.result("timed_steps", rep.steps);
    m.result("ternary_ms_per_step", rep.ternary.median_ms);
    m.result("binary_ms_per_step", rep.binary.median_ms);
    m.result("ratio", rep.ratio);
    m.save(&dir)?;
    if let Some(w) = &rep.warning {
        println!("warning: {w}");
    }
    println!(
        "ternary {:.3} ms/step, binary {:.3} ms/step, ratio {:.2}x",
        rep.ternary.median_ms, rep.binary.median_ms, rep.ratio
    );
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn explicit_out_dir_wins() {
        let o = OutArgs { out: Some("x".into()), force: false };
        assert_eq!(o.dir("train"), PathBuf::from("x"));
    }
}
