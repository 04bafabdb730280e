//! K-fold cross-validation over the screened-size grid and the
//! one-standard-error rule.

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::clustering::ClusterMethod;
use crate::coda::CompositionMatrix;
use crate::error::{Error, Result};
use crate::glm::{self, Family};
use crate::metrics;
use crate::rng::stream_rng;
use crate::screening::{univariate_effects, validate_response};
use crate::slr::{fit_slr_screened, SlrFit};

/// Cross-validation error curve over candidate screened sizes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvPath {
    pub grid: Vec<usize>,
    /// MSE (Gaussian) or 1 - AUC (Binomial), averaged over folds.
    pub mean_error: Vec<f64>,
    /// Standard deviation of fold errors over `sqrt(folds used)`.
    pub se: Vec<f64>,
    pub folds: usize,
    /// `fold_errors[g][k]`: error of grid value `g` on fold `k`; `None` when skipped.
    pub fold_errors: Vec<Vec<Option<f64>>>,
    /// Cells whose fit failed and were scored with the intercept-only model.
    pub failed_cells: usize,
    /// Binomial cells skipped because the held-out fold had one class.
    pub skipped_cells: usize,
}

/// All even sizes from 2 to `min(p, 30)`, plus `p` itself when `p <= 30`.
pub fn default_grid(p: usize) -> Vec<usize> {
    let mut grid: Vec<usize> = (2..=p.min(30)).step_by(2).collect();
    if p <= 30 && grid.last() != Some(&p) {
        grid.push(p);
    }
    grid
}

/// Sorts, dedups and range-checks a user grid.
pub fn normalize_grid(grid: &[usize], p: usize) -> Result<Vec<usize>> {
    if grid.is_empty() {
        return Err(Error::InvalidGrid("grid is empty".into()));
    }
    let mut g = grid.to_vec();
    g.sort_unstable();
    g.dedup();
    if g[0] < 2 {
        return Err(Error::InvalidGrid(format!("size {} is below 2", g[0])));
    }
    if let Some(&last) = g.last().filter(|&&m| m > p) {
        return Err(Error::InvalidGrid(format!("size {last} exceeds p = {p}")));
    }
    Ok(g)
}

/// Fold labels `0..k` for every sample.
///
/// With `stratify`, samples are grouped by class (0 then 1), shuffled within
/// each class, concatenated and dealt round-robin; fold sizes then differ by
/// at most one both overall and within each class.
pub fn stratified_kfold(y: &[f64], k: usize, seed: u64, stratify: bool) -> Result<Vec<usize>> {
    let n = y.len();
    if k < 2 {
        return Err(Error::KTooSmall(k));
    }
    if n < k {
        return Err(Error::KTooLarge { k, n });
    }
    let mut rng = stream_rng(seed, 0);
    let mut order: Vec<usize> = Vec::with_capacity(n);
    if stratify {
        let mut zeros: Vec<usize> = (0..n).filter(|&i| y[i] == 0.0).collect();
        let mut ones: Vec<usize> = (0..n).filter(|&i| y[i] != 0.0).collect();
        zeros.shuffle(&mut rng);
        ones.shuffle(&mut rng);
        order.extend(zeros);
        order.extend(ones);
    } else {
        order.extend(0..n);
        order.shuffle(&mut rng);
    }
    let mut folds = vec![0; n];
    for (pos, &i) in order.iter().enumerate() {
        folds[i] = pos % k;
    }
    Ok(folds)
}

fn split_indices(assignment: &[usize], fold: usize) -> (Vec<usize>, Vec<usize>) {
    (0..assignment.len()).partition(|&i| assignment[i] != fold)
}

fn take(y: &[f64], idx: &[usize]) -> Vec<f64> {
    idx.iter().map(|&i| y[i]).collect()
}

/// Fits the model for size `m` on every fold except `fold`.
pub fn fit_on_training_folds(
    x: &CompositionMatrix,
    y: &[f64],
    assignment: &[usize],
    fold: usize,
    m: usize,
    family: Family,
    method: ClusterMethod,
) -> Result<SlrFit> {
    let (train, _) = split_indices(assignment, fold);
    let xt = x.select_rows(&train);
    let yt = take(y, &train);
    let effects = univariate_effects(&xt, &yt, family)?;
    fit_slr_screened(&xt, &yt, &effects, m, method)
}

#[derive(Debug, Clone, Copy)]
enum Cell {
    Scored(f64),
    Fallback(f64),
    Skipped,
}

fn held_out_error(pred: &[f64], y: &[f64], family: Family) -> Option<f64> {
    match family {
        Family::Gaussian => metrics::mse(y, pred).ok(),
        Family::Binomial => metrics::auc(pred, y).ok().map(|a| 1.0 - a),
    }
}

fn fold_cells(
    x: &CompositionMatrix,
    y: &[f64],
    assignment: &[usize],
    fold: usize,
    grid: &[usize],
    family: Family,
    method: ClusterMethod,
) -> Vec<Cell> {
    let (train, test) = split_indices(assignment, fold);
    let xt = x.select_rows(&train);
    let yt = take(y, &train);
    let xv = x.select_rows(&test);
    let yv = take(y, &test);

    let single_class =
        family == Family::Binomial && yv.iter().all(|&v| v == yv[0]);
    if single_class || test.is_empty() {
        return vec![Cell::Skipped; grid.len()];
    }
    // intercept-only prediction, used when a fit fails
    let null_pred = vec![glm::mean(&yt); yv.len()];
    let fallback = || {
        Cell::Fallback(held_out_error(&null_pred, &yv, family).unwrap_or(f64::MAX))
    };
    let effects = match univariate_effects(&xt, &yt, family) {
        Ok(e) => e,
        Err(_) => return vec![fallback(); grid.len()],
    };
    grid.iter()
        .map(|&m| {
            fit_slr_screened(&xt, &yt, &effects, m, method)
                .and_then(|fit| fit.model.predict(&xv))
                .ok()
                .and_then(|pred| held_out_error(&pred, &yv, family))
                .map_or_else(fallback, Cell::Scored)
        })
        .collect()
}

pub fn cv_path(
    x: &CompositionMatrix,
    y: &[f64],
    grid: &[usize],
    k: usize,
    family: Family,
    method: ClusterMethod,
    seed: u64,
) -> Result<CvPath> {
    validate_response(y, x.n(), family)?;
    let assignment = stratified_kfold(y, k, seed, family == Family::Binomial)?;
    cv_path_with_folds(x, y, grid, &assignment, k, family, method)
}

/// Cross-validation with a fixed fold assignment.
pub fn cv_path_with_folds(
    x: &CompositionMatrix,
    y: &[f64],
    grid: &[usize],
    assignment: &[usize],
    k: usize,
    family: Family,
    method: ClusterMethod,
) -> Result<CvPath> {
    validate_response(y, x.n(), family)?;
    if assignment.len() != x.n() {
        return Err(Error::LengthMismatch(assignment.len(), x.n()));
    }
    if k < 2 {
        return Err(Error::KTooSmall(k));
    }
    if let Some(&bad) = assignment.iter().find(|&&f| f >= k) {
        return Err(Error::InvalidConfig(format!("fold label {bad} >= {k}")));
    }
    let grid = normalize_grid(grid, x.p())?;

    let cells: Vec<Vec<Cell>> = (0..k)
        .into_par_iter()
        .map(|fold| fold_cells(x, y, assignment, fold, &grid, family, method))
        .collect();

    let mut mean_error = Vec::with_capacity(grid.len());
    let mut se = Vec::with_capacity(grid.len());
    let mut fold_errors = Vec::with_capacity(grid.len());
    let (mut failed_cells, mut skipped_cells) = (0, 0);
    for g in 0..grid.len() {
        let mut row = Vec::with_capacity(k);
        for fold_cells in &cells {
            match fold_cells[g] {
                Cell::Scored(e) => row.push(Some(e)),
                Cell::Fallback(e) => {
                    failed_cells += 1;
                    row.push(Some(e));
                }
                Cell::Skipped => {
                    skipped_cells += 1;
                    row.push(None);
                }
            }
        }
        let used: Vec<f64> = row.iter().flatten().copied().collect();
        if used.is_empty() {
            return Err(Error::InvalidConfig(
                "no held-out fold contains both classes".into(),
            ));
        }
        let mean = used.iter().sum::<f64>() / used.len() as f64;
        let s = if used.len() > 1 {
            let var = used.iter().map(|e| (e - mean) * (e - mean)).sum::<f64>()
                / (used.len() - 1) as f64;
            (var / used.len() as f64).sqrt()
        } else {
            0.0
        };
        mean_error.push(mean);
        se.push(s);
        fold_errors.push(row);
    }
    Ok(CvPath {
        grid,
        mean_error,
        se,
        folds: k,
        fold_errors,
        failed_cells,
        skipped_cells,
    })
}

/// Outcome of the one-standard-error rule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OneSeChoice {
    /// Smallest size whose mean error is within one SE of the minimum.
    pub m: usize,
    /// Size with the minimum mean error (smallest on ties).
    pub m_min: usize,
    pub threshold: f64,
}

/// Most parsimonious size whose mean error is at most
/// `mean_error(m_min) + se(m_min)`.
pub fn select_one_se(path: &CvPath) -> Result<OneSeChoice> {
    if path.grid.is_empty() {
        return Err(Error::Empty);
    }
    let mut best = 0;
    for g in 1..path.grid.len() {
        if path.mean_error[g] < path.mean_error[best] {
            best = g;
        }
    }
    let threshold = path.mean_error[best] + path.se[best];
    let chosen = (0..path.grid.len())
        .find(|&g| path.mean_error[g] <= threshold)
        .unwrap_or(best);
    Ok(OneSeChoice {
        m: path.grid[chosen],
        m_min: path.grid[best],
        threshold,
    })
}
