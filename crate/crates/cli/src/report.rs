//! JSON documents written by the commands.
//!
//! Floats go through `serde_json`, which prints the shortest decimal that
//! parses back to the same `f64`, so saved models re-load bit-exactly.

use serde::{Deserialize, Serialize};
use slr_core::slr::FitDiagnostics;
use slr_core::{BalancePartition, CompositionMatrix, CvPath, Family, OneSeChoice, SlrModel};

use crate::error::{CliError, Result};

/// A fitted balance model, with groups named by feature.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelDoc {
    pub plus: Vec<String>,
    pub minus: Vec<String>,
    pub theta0: f64,
    pub theta1: f64,
    pub family: Family,
    pub m: usize,
    pub feature_names: Vec<String>,
}

impl ModelDoc {
    pub fn from_model(model: &SlrModel) -> Self {
        let names = |idx: &[usize]| -> Vec<String> {
            idx.iter().map(|&j| model.feature_names[j].clone()).collect()
        };
        Self {
            plus: names(model.partition.plus()),
            minus: names(model.partition.minus()),
            theta0: model.theta0,
            theta1: model.theta1,
            family: model.family,
            m: model.m,
            feature_names: model.feature_names.clone(),
        }
    }

    /// Rebuilds the model against the columns of `x`, matching by name so
    /// that a re-ordered input table still predicts correctly.
    pub fn to_model(&self, x: &CompositionMatrix) -> Result<SlrModel> {
        let names = x.feature_names();
        if names.len() != self.feature_names.len() {
            return Err(CliError::InvalidArgument(format!(
                "model was fitted on {} features, input has {}",
                self.feature_names.len(),
                names.len()
            )));
        }
        let lookup = |name: &String| -> Result<usize> {
            names.iter().position(|n| n == name).ok_or_else(|| {
                CliError::InvalidArgument(format!("feature {name:?} is missing from the input"))
            })
        };
        if let Some(missing) = self.feature_names.iter().find(|n| !names.contains(n)) {
            return Err(CliError::InvalidArgument(format!(
                "feature {missing:?} is missing from the input"
            )));
        }
        let plus = self.plus.iter().map(lookup).collect::<Result<Vec<_>>>()?;
        let minus = self.minus.iter().map(lookup).collect::<Result<Vec<_>>>()?;
        Ok(SlrModel {
            partition: BalancePartition::with_dim(plus, minus, names.len())?,
            theta0: self.theta0,
            theta1: self.theta1,
            family: self.family,
            m: self.m,
            feature_names: names.to_vec(),
        })
    }
}

/// Output of `fit`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FitReport {
    pub model: ModelDoc,
    pub beta: Vec<f64>,
    /// Present when the size was chosen by cross-validation.
    pub cv_path: Option<CvPath>,
    pub one_se: Option<OneSeChoice>,
    pub diagnostics: serde_json::Value,
    pub fitted: Vec<f64>,
}

impl FitReport {
    pub fn new(
        model: &SlrModel,
        cv_path: Option<CvPath>,
        one_se: Option<OneSeChoice>,
        diagnostics: serde_json::Value,
        x: &CompositionMatrix,
    ) -> Result<Self> {
        Ok(Self {
            model: ModelDoc::from_model(model),
            beta: model.to_beta(x.p()),
            cv_path,
            one_se,
            diagnostics,
            fitted: model.predict(x)?,
        })
    }
}

pub fn fit_diagnostics_json(d: &FitDiagnostics, x: &CompositionMatrix) -> serde_json::Value {
    let names = |idx: &[usize]| -> Vec<&str> {
        idx.iter().map(|&j| x.feature_names()[j].as_str()).collect()
    };
    serde_json::json!({
        "screened": names(&d.screened),
        "constant_columns": names(&d.constant_columns),
        "screening_nonconverged": d.screening_nonconverged,
        "degenerate_split": d.degenerate_split,
        "glm_converged": d.glm_converged,
    })
}

/// Output of `cv`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CvReport {
    pub cv_path: CvPath,
    pub one_se: OneSeChoice,
}

/// Output of `predict`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PredictReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ids: Option<Vec<String>>,
    pub linear_predictor: Vec<f64>,
    pub predictions: Vec<f64>,
}

/// Location summary of one metric across replications.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub count: usize,
    pub mean: f64,
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
}

impl Summary {
    /// Quantiles by linear interpolation between order statistics.
    /// Non-finite values are dropped; `None` if nothing remains.
    pub fn of(values: &[f64]) -> Option<Self> {
        let mut v: Vec<f64> = values.iter().copied().filter(|x| x.is_finite()).collect();
        if v.is_empty() {
            return None;
        }
        v.sort_by(f64::total_cmp);
        let q = |prob: f64| {
            let h = prob * (v.len() - 1) as f64;
            let lo = h.floor() as usize;
            let hi = h.ceil() as usize;
            v[lo] + (h - lo as f64) * (v[hi] - v[lo])
        };
        Some(Self {
            count: v.len(),
            mean: v.iter().sum::<f64>() / v.len() as f64,
            min: v[0],
            q1: q(0.25),
            median: q(0.5),
            q3: q(0.75),
            max: v[v.len() - 1],
        })
    }
}
