//! Argument definitions and command dispatch.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use slr_core::oracle::DEFAULT_MAX_P;
use slr_core::simgen::simulate_dataset;
use slr_core::{exhaustive_best_balance, fit_slr, ClusterMethod, Family, SimConfig, SlrModel};

use crate::config::{check_pseudocount, BenchConfig, CvSettings, GridSpec, StabilityConfig};
use crate::error::{CliError, Result};
use crate::harness::{cv_fit, run_bench, run_stability};
use crate::io::{load_dataset, load_features, write_dataset_csv, Dataset};
use crate::report::{fit_diagnostics_json, CvReport, FitReport, ModelDoc, PredictReport};

#[derive(Debug, Parser)]
#[command(name = "slr", version, about = "Supervised log-ratio balance selection")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit a balance model (size by CV + one-SE rule unless --m is given).
    Fit(FitArgs),
    /// Apply a saved model to new samples.
    Predict(PredictArgs),
    /// Cross-validation path over the screening sizes.
    Cv(CvArgs),
    /// Draw a dataset from the latent-variable generator as CSV.
    Simulate(SimulateArgs),
    /// Replicated simulation benchmark.
    Bench(BenchArgs),
    /// Selection frequencies over repeated train/test splits.
    Stability(StabilityArgs),
}

#[derive(Debug, Args)]
pub struct DataArgs {
    /// Samples-by-features CSV with a header row.
    #[arg(long)]
    pub input: PathBuf,
    /// Response column name, or path to a single-column response file.
    #[arg(long)]
    pub response: String,
    #[arg(long, default_value = "gaussian")]
    pub family: Family,
    /// Added to every cell before closure; required when the table has zeros.
    #[arg(long)]
    pub pseudocount: Option<f64>,
}

#[derive(Debug, Args)]
pub struct CvArgsCommon {
    #[arg(long, default_value_t = 10)]
    pub folds: usize,
    /// `default`, a list `2,4,6`, or a range `2:20:2`.
    #[arg(long, default_value = "default")]
    pub grid: String,
    #[arg(long, default_value = "spectral")]
    pub cluster: ClusterMethod,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl CvArgsCommon {
    fn settings(&self) -> Result<CvSettings> {
        Ok(CvSettings {
            folds: self.folds,
            grid: GridSpec::parse(&self.grid)?,
            method: self.cluster,
        })
    }
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub cv: CvArgsCommon,
    /// Screening size; skips cross-validation.
    #[arg(long, conflicts_with = "exhaustive")]
    pub m: Option<usize>,
    /// Search every balance exhaustively (at most 10 features).
    #[arg(long)]
    pub exhaustive: bool,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Model JSON written by `fit`.
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub pseudocount: Option<f64>,
}

#[derive(Debug, Args)]
pub struct CvArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub cv: CvArgsCommon,
}

#[derive(Debug, Args)]
pub struct SimArgs {
    /// Design preset: `i` (three vs three) or `ii` (five vs one).
    #[arg(long, default_value = "i", value_parser = ["i", "ii"])]
    pub case: String,
    #[arg(long, default_value = "gaussian")]
    pub family: Family,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub p: Option<usize>,
    #[arg(long)]
    pub sigma_eps: Option<f64>,
    #[arg(long)]
    pub sigma_y: Option<f64>,
    #[arg(long)]
    pub theta1: Option<f64>,
    #[arg(long)]
    pub binary_scale: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl SimArgs {
    pub fn config(&self) -> SimConfig {
        let mut cfg = match self.case.as_str() {
            "ii" => SimConfig::case_ii(self.family, self.seed),
            _ => SimConfig::case_i(self.family, self.seed),
        };
        cfg.n = self.n.unwrap_or(cfg.n);
        cfg.p = self.p.unwrap_or(cfg.p);
        cfg.sigma_eps = self.sigma_eps.unwrap_or(cfg.sigma_eps);
        cfg.sigma_y = self.sigma_y.unwrap_or(cfg.sigma_y);
        cfg.theta1_true = self.theta1.unwrap_or(cfg.theta1_true);
        cfg.binary_scale = self.binary_scale.unwrap_or(cfg.binary_scale);
        cfg
    }
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub sim: SimArgs,
    /// Destination of the generated CSV.
    #[arg(long)]
    pub csv: PathBuf,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub sim: SimArgs,
    #[arg(long, default_value_t = 100)]
    pub reps: usize,
    #[arg(long, default_value_t = 10)]
    pub folds: usize,
    #[arg(long, default_value = "default")]
    pub grid: String,
    #[arg(long, default_value = "spectral")]
    pub cluster: ClusterMethod,
    /// Test-set size (defaults to the training size).
    #[arg(long)]
    pub test_n: Option<usize>,
    /// Shuffle the training labels (negative control).
    #[arg(long)]
    pub permute_labels: bool,
    /// Record wall-clock fit times (output is then not reproducible).
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Args)]
pub struct StabilityArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub cv: CvArgsCommon,
    #[arg(long, default_value_t = 20)]
    pub reps: usize,
    /// Training fraction of each split.
    #[arg(long, default_value_t = 0.7)]
    pub split: f64,
}

fn load(data: &DataArgs) -> Result<(Dataset, Vec<f64>)> {
    let pc = check_pseudocount(data.pseudocount)?;
    let mut d = load_dataset(&data.input, Some(&data.response), data.family, pc)?;
    let y = d.y.take().ok_or_else(|| CliError::MissingResponse(data.response.clone()))?;
    Ok((d, y))
}

fn to_value<T: serde::Serialize>(v: &T) -> Result<Value> {
    Ok(serde_json::to_value(v)?)
}

fn fit(args: &FitArgs) -> Result<Value> {
    let (d, y) = load(&args.data)?;
    let x = &d.x;
    let family = args.data.family;
    let report = if args.exhaustive {
        let r = exhaustive_best_balance(x, &y, family, DEFAULT_MAX_P)?;
        let model = SlrModel {
            m: r.partition.support_size(),
            partition: r.partition,
            theta0: r.theta0,
            theta1: r.theta1,
            family,
            feature_names: x.feature_names().to_vec(),
        };
        let diagnostics = json!({
            "exhaustive": true,
            "criterion": r.criterion,
            "ties": r.ties,
            "candidates": r.candidates,
        });
        FitReport::new(&model, None, None, diagnostics, x)?
    } else if let Some(m) = args.m {
        let fit = fit_slr(x, &y, m, family, args.cv.cluster)?;
        FitReport::new(&fit.model, None, None, fit_diagnostics_json(&fit.diagnostics, x), x)?
    } else {
        let (fit, path, choice) = cv_fit(x, &y, family, &args.cv.settings()?, args.cv.seed)?;
        let diagnostics = fit_diagnostics_json(&fit.diagnostics, x);
        FitReport::new(&fit.model, Some(path), Some(choice), diagnostics, x)?
    };
    to_value(&report)
}

/// Reads a model from either a full `fit` report or a bare model document.
pub fn read_model(path: &Path) -> Result<ModelDoc> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let mut value: Value = serde_json::from_str(&text)?;
    if let Some(model) = value.get_mut("model") {
        value = model.take();
    }
    Ok(serde_json::from_value(value)?)
}

fn predict(args: &PredictArgs) -> Result<Value> {
    let doc = read_model(&args.model)?;
    let pc = check_pseudocount(args.pseudocount)?;
    let d = load_features(&args.input, &doc.feature_names, pc)?;
    let model = doc.to_model(&d.x)?;
    to_value(&PredictReport {
        ids: d.ids,
        linear_predictor: model.linear_predictor(&d.x)?,
        predictions: model.predict(&d.x)?,
    })
}

fn cv(args: &CvArgs) -> Result<Value> {
    let (d, y) = load(&args.data)?;
    let settings = args.cv.settings()?;
    let grid = settings.grid.resolve(d.x.p())?;
    let cv_path = slr_core::cv_path(
        &d.x,
        &y,
        &grid,
        settings.folds,
        args.data.family,
        settings.method,
        args.cv.seed,
    )?;
    let one_se = slr_core::select_one_se(&cv_path)?;
    to_value(&CvReport { cv_path, one_se })
}

fn simulate(args: &SimulateArgs) -> Result<Value> {
    let cfg = args.sim.config();
    let data = simulate_dataset(&cfg)?;
    let file = std::fs::File::create(&args.csv).map_err(|source| CliError::Io {
        path: args.csv.display().to_string(),
        source,
    })?;
    write_dataset_csv(std::io::BufWriter::new(file), &data.x, &data.y)?;
    Ok(json!({
        "config": cfg,
        "csv": args.csv.display().to_string(),
        "beta_true": data.beta_true,
    }))
}

fn bench(args: &BenchArgs) -> Result<Value> {
    let cfg = BenchConfig {
        sim: args.sim.config(),
        reps: args.reps,
        cv: CvSettings {
            folds: args.folds,
            grid: GridSpec::parse(&args.grid)?,
            method: args.cluster,
        },
        test_n: args.test_n,
        permute_labels: args.permute_labels,
        timing: args.timing,
    };
    to_value(&run_bench(&cfg)?)
}

fn stability(args: &StabilityArgs) -> Result<Value> {
    let (d, y) = load(&args.data)?;
    let cfg = StabilityConfig {
        reps: args.reps,
        split: args.split,
        cv: args.cv.settings()?,
        seed: args.cv.seed,
    };
    to_value(&run_stability(&d.x, &y, args.data.family, &cfg)?)
}

/// Runs one command and returns its JSON document.
pub fn run(command: &Command) -> Result<Value> {
    match command {
        Command::Fit(a) => fit(a),
        Command::Predict(a) => predict(a),
        Command::Cv(a) => cv(a),
        Command::Simulate(a) => simulate(a),
        Command::Bench(a) => bench(a),
        Command::Stability(a) => stability(a),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn sim_overrides() {
        let cli = Cli::try_parse_from([
            "slr", "bench", "--case", "ii", "--family", "binomial", "--n", "40", "--sigma-eps",
            "0", "--reps", "3",
        ])
        .unwrap();
        let Command::Bench(b) = cli.command else { panic!() };
        let cfg = b.sim.config();
        assert_eq!((cfg.n, cfg.p, cfg.sigma_eps), (40, 30, 0.0));
        assert_eq!(cfg.minus_set, vec![5]);
        assert_eq!(cfg.family, Family::Binomial);
        assert_eq!(b.reps, 3);
    }

    #[test]
    fn m_and_exhaustive_conflict() {
        let r = Cli::try_parse_from([
            "slr", "fit", "--input", "a.csv", "--response", "y", "--m", "4", "--exhaustive",
        ]);
        assert!(r.is_err());
    }
}
