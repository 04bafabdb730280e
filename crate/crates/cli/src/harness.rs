//! Replication harnesses: the simulation benchmark and the split-stability
//! analysis. Each replication owns its RNG streams and results are collected
//! in replication order, so output does not depend on the thread count.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use slr_core::metrics::{auc, l2_error, mse, selection_metrics};
use slr_core::rng::{derive_seed, stream_rng};
use slr_core::simgen::simulate_stream;
use slr_core::{
    cv_path, fit_slr, select_one_se, CompositionMatrix, CvPath, Family, OneSeChoice, SimConfig,
    SlrFit,
};

use crate::config::{BenchConfig, CvSettings, StabilityConfig};
use crate::error::Result;
use crate::report::Summary;

/// Stream offset for the label permutation of the negative control.
const PERMUTATION_STREAM: u64 = 1 << 32;

/// Cross-validates over the grid, applies the one-SE rule and refits on all
/// of `(x, y)` at the chosen size.
pub fn cv_fit(
    x: &CompositionMatrix,
    y: &[f64],
    family: Family,
    cv: &CvSettings,
    seed: u64,
) -> Result<(SlrFit, CvPath, OneSeChoice)> {
    let grid = cv.grid.resolve(x.p())?;
    let path = cv_path(x, y, &grid, cv.folds, family, cv.method, seed)?;
    let choice = select_one_se(&path)?;
    let fit = fit_slr(x, y, choice.m, family, cv.method)?;
    Ok((fit, path, choice))
}

/// Held-out metric: MSE for Gaussian, AUC for Binomial.
fn test_metric(pred: &[f64], y: &[f64], family: Family) -> Option<f64> {
    match family {
        Family::Gaussian => mse(y, pred).ok(),
        Family::Binomial => auc(pred, y).ok(),
    }
}

fn metric_name(family: Family) -> &'static str {
    match family {
        Family::Gaussian => "mse",
        Family::Binomial => "auc",
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub rep: usize,
    /// Set when cross-validation or the final fit failed; metrics then
    /// describe the intercept-only model.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub m: Option<usize>,
    pub m_min: Option<usize>,
    pub plus: Vec<usize>,
    pub minus: Vec<usize>,
    /// Test MSE (Gaussian) or test AUC (Binomial).
    pub test_metric: Option<f64>,
    pub l2_error: f64,
    pub f1: f64,
    pub tpr: f64,
    pub fpr: f64,
    pub precision: f64,
    pub cv_failed_cells: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fit_seconds: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub config: SimConfig,
    pub reps: usize,
    pub test_n: usize,
    pub folds: usize,
    pub cluster: slr_core::ClusterMethod,
    pub permute_labels: bool,
    /// `"mse"` or `"auc"`.
    pub metric: String,
    pub failed_reps: usize,
    pub rows: Vec<BenchRow>,
    pub summary: BTreeMap<String, Summary>,
}

fn bench_rep(cfg: &BenchConfig, rep: usize) -> Result<BenchRow> {
    let sim = &cfg.sim;
    let train = simulate_stream(sim, 2 * rep as u64)?;
    let test_cfg = SimConfig {
        n: cfg.test_n.unwrap_or(sim.n),
        ..sim.clone()
    };
    let test = simulate_stream(&test_cfg, 2 * rep as u64 + 1)?;
    let mut y_train = train.y.clone();
    if cfg.permute_labels {
        y_train.shuffle(&mut stream_rng(sim.seed, PERMUTATION_STREAM + rep as u64));
    }

    let started = Instant::now();
    let outcome = cv_fit(
        &train.x,
        &y_train,
        sim.family,
        &cfg.cv,
        derive_seed(sim.seed, rep as u64),
    );
    let elapsed = started.elapsed().as_secs_f64();

    let p = sim.p;
    let (beta_hat, pred, row_fit, error) = match outcome {
        Ok((fit, path, choice)) => {
            let pred = fit.model.predict(&test.x)?;
            (fit.model.to_beta(p), pred, Some((fit, path, choice)), None)
        }
        Err(e) => {
            let mean = y_train.iter().sum::<f64>() / y_train.len() as f64;
            (vec![0.0; p], vec![mean; test.y.len()], None, Some(e.to_string()))
        }
    };
    let sel = selection_metrics(&beta_hat, &train.beta_true, 0.0)?;
    let (m, m_min, plus, minus, cv_failed_cells) = match &row_fit {
        Some((fit, path, choice)) => (
            Some(choice.m),
            Some(choice.m_min),
            fit.model.partition.plus().to_vec(),
            fit.model.partition.minus().to_vec(),
            path.failed_cells,
        ),
        None => (None, None, vec![], vec![], 0),
    };
    Ok(BenchRow {
        rep,
        error,
        m,
        m_min,
        plus,
        minus,
        test_metric: test_metric(&pred, &test.y, sim.family),
        l2_error: l2_error(&beta_hat, &train.beta_true)?,
        f1: sel.f1,
        tpr: sel.tpr,
        fpr: sel.fpr,
        precision: sel.precision,
        cv_failed_cells,
        fit_seconds: cfg.timing.then_some(elapsed),
    })
}

/// Simulate → cross-validate → one-SE fit → score, `cfg.reps` times.
///
/// Replication `r` draws its training set from stream `2r` and its test set
/// from stream `2r + 1` of the configured seed.
pub fn run_bench(cfg: &BenchConfig) -> Result<BenchReport> {
    cfg.validate()?;
    let rows = (0..cfg.reps)
        .into_par_iter()
        .map(|rep| bench_rep(cfg, rep))
        .collect::<Result<Vec<_>>>()?;

    let mut summary = BTreeMap::new();
    let mut add = |name: &str, values: Vec<f64>| {
        if let Some(s) = Summary::of(&values) {
            summary.insert(name.to_string(), s);
        }
    };
    let col = |f: fn(&BenchRow) -> Option<f64>| rows.iter().filter_map(f).collect::<Vec<_>>();
    add(&format!("test_{}", metric_name(cfg.sim.family)), col(|r| r.test_metric));
    add("l2_error", col(|r| Some(r.l2_error)));
    add("f1", col(|r| Some(r.f1)));
    add("tpr", col(|r| Some(r.tpr)));
    add("fpr", col(|r| Some(r.fpr)));
    add("precision", col(|r| Some(r.precision)));
    add("m", col(|r| r.m.map(|m| m as f64)));
    if cfg.timing {
        add("fit_seconds", col(|r| r.fit_seconds));
    }

    Ok(BenchReport {
        config: cfg.sim.clone(),
        reps: cfg.reps,
        test_n: cfg.test_n.unwrap_or(cfg.sim.n),
        folds: cfg.cv.folds,
        cluster: cfg.cv.method,
        permute_labels: cfg.permute_labels,
        metric: metric_name(cfg.sim.family).to_string(),
        failed_reps: rows.iter().filter(|r| r.error.is_some()).count(),
        rows,
        summary,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariableStability {
    pub name: String,
    /// Splits in which the variable entered the balance at all.
    pub selected: usize,
    pub numerator: usize,
    pub denominator: usize,
    /// `selected / successful splits`.
    pub proportion: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitRecord {
    pub split: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub n_train: usize,
    pub n_test: usize,
    pub m: Option<usize>,
    /// Number of variables in the fitted balance.
    pub model_size: Option<usize>,
    pub plus: Vec<String>,
    pub minus: Vec<String>,
    /// Test MSE (Gaussian) or test AUC (Binomial).
    pub test_metric: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub splits: usize,
    pub successful: usize,
    pub split_fraction: f64,
    pub family: Family,
    pub metric: String,
    pub variables: Vec<VariableStability>,
    pub per_split: Vec<SplitRecord>,
    pub metric_summary: Option<Summary>,
    pub model_size_summary: Option<Summary>,
}

/// Training rows for one split, sorted ascending. Binomial data is split
/// within each class so both sides keep the class ratio.
pub fn train_test_split(y: &[f64], frac: f64, stratify: bool, seed: u64, split: usize) -> (Vec<usize>, Vec<usize>) {
    let mut rng = stream_rng(seed, split as u64);
    let groups: Vec<Vec<usize>> = if stratify {
        [0.0, 1.0]
            .iter()
            .map(|&c| (0..y.len()).filter(|&i| y[i] == c).collect())
            .collect()
    } else {
        vec![(0..y.len()).collect()]
    };
    let mut train = Vec::new();
    for mut g in groups {
        g.shuffle(&mut rng);
        let mut k = (frac * g.len() as f64).round() as usize;
        if g.len() >= 2 {
            k = k.clamp(1, g.len() - 1);
        }
        train.extend_from_slice(&g[..k.min(g.len())]);
    }
    train.sort_unstable();
    let mut in_train = vec![false; y.len()];
    train.iter().for_each(|&i| in_train[i] = true);
    let test = (0..y.len()).filter(|&i| !in_train[i]).collect();
    (train, test)
}

fn stability_split(
    x: &CompositionMatrix,
    y: &[f64],
    family: Family,
    cfg: &StabilityConfig,
    split: usize,
) -> SplitRecord {
    let (train, test) =
        train_test_split(y, cfg.split, family == Family::Binomial, cfg.seed, split);
    let mut record = SplitRecord {
        split,
        error: None,
        n_train: train.len(),
        n_test: test.len(),
        m: None,
        model_size: None,
        plus: vec![],
        minus: vec![],
        test_metric: None,
    };
    let xt = x.select_rows(&train);
    let yt: Vec<f64> = train.iter().map(|&i| y[i]).collect();
    let xv = x.select_rows(&test);
    let yv: Vec<f64> = test.iter().map(|&i| y[i]).collect();
    let outcome = cv_fit(&xt, &yt, family, &cfg.cv, derive_seed(cfg.seed, split as u64))
        .and_then(|(fit, _, choice)| Ok((fit.model.predict(&xv)?, fit, choice)));
    match outcome {
        Ok((pred, fit, choice)) => {
            let names = x.feature_names();
            let part = &fit.model.partition;
            record.m = Some(choice.m);
            record.model_size = Some(part.support_size());
            record.plus = part.plus().iter().map(|&j| names[j].clone()).collect();
            record.minus = part.minus().iter().map(|&j| names[j].clone()).collect();
            record.test_metric = test_metric(&pred, &yv, family);
            if record.test_metric.is_none() {
                record.error = Some("test metric undefined for this split".into());
            }
        }
        Err(e) => record.error = Some(e.to_string()),
    }
    record
}

/// Repeated random train/test splits with a full CV + one-SE fit on each
/// training part; reports how often each variable enters the balance and on
/// which side.
pub fn run_stability(
    x: &CompositionMatrix,
    y: &[f64],
    family: Family,
    cfg: &StabilityConfig,
) -> Result<StabilityReport> {
    cfg.validate()?;
    slr_core::screening::validate_response(y, x.n(), family)?;
    let per_split: Vec<SplitRecord> = (0..cfg.reps)
        .into_par_iter()
        .map(|s| stability_split(x, y, family, cfg, s))
        .collect();

    let fitted: Vec<&SplitRecord> = per_split.iter().filter(|r| r.model_size.is_some()).collect();
    let successful = fitted.len();
    let variables = x
        .feature_names()
        .iter()
        .map(|name| {
            let numerator = fitted.iter().filter(|r| r.plus.contains(name)).count();
            let denominator = fitted.iter().filter(|r| r.minus.contains(name)).count();
            let selected = numerator + denominator;
            VariableStability {
                name: name.clone(),
                selected,
                numerator,
                denominator,
                proportion: if successful == 0 {
                    0.0
                } else {
                    selected as f64 / successful as f64
                },
            }
        })
        .collect();
    let metrics: Vec<f64> = per_split.iter().filter_map(|r| r.test_metric).collect();
    let sizes: Vec<f64> = fitted.iter().filter_map(|r| r.model_size.map(|s| s as f64)).collect();
    Ok(StabilityReport {
        splits: cfg.reps,
        successful,
        split_fraction: cfg.split,
        family,
        metric: metric_name(family).to_string(),
        variables,
        metric_summary: Summary::of(&metrics),
        model_size_summary: Summary::of(&sizes),
        per_split,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splits_partition_the_rows() {
        let y: Vec<f64> = (0..50).map(|i| (i % 3 == 0) as u8 as f64).collect();
        for stratify in [false, true] {
            let (train, test) = train_test_split(&y, 0.7, stratify, 5, 2);
            assert_eq!(train.len() + test.len(), 50);
            let mut all: Vec<usize> = train.iter().chain(&test).copied().collect();
            all.sort_unstable();
            assert_eq!(all, (0..50).collect::<Vec<_>>());
            assert_eq!(train.len(), 35);
        }
        let (train, _) = train_test_split(&y, 0.7, true, 5, 2);
        let ones = train.iter().filter(|&&i| y[i] == 1.0).count();
        assert_eq!(ones, 12); // round(0.7 * 17)
        assert_eq!(train_test_split(&y, 0.7, true, 5, 2), train_test_split(&y, 0.7, true, 5, 2));
        assert_ne!(train_test_split(&y, 0.7, true, 5, 2).0, train_test_split(&y, 0.7, true, 5, 3).0);
    }
}
