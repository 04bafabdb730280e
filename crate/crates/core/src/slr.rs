//! The supervised log-ratio estimator: screen, cluster, fit one balance.

use serde::{Deserialize, Serialize};

use crate::clustering::{cluster_two, ClusterMethod};
use crate::coda::{variation_matrix, BalancePartition, CompositionMatrix};
use crate::error::{Error, Result};
use crate::glm::{self, Family};
use crate::screening::{top_m_indices, univariate_effects, validate_response, UnivariateEffects};

/// A fitted one-balance model. `theta1 >= 0`, so `plus` is the numerator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlrModel {
    pub partition: BalancePartition,
    pub theta0: f64,
    pub theta1: f64,
    pub family: Family,
    pub m: usize,
    pub feature_names: Vec<String>,
}

/// Signed coefficients of a single-balance GLM.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BalanceGlm {
    pub theta0: f64,
    pub theta1: f64,
    pub converged: bool,
}

/// Things that went sideways during a fit but did not stop it.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FitDiagnostics {
    pub screened: Vec<usize>,
    pub constant_columns: Vec<usize>,
    pub screening_nonconverged: usize,
    pub degenerate_split: bool,
    pub glm_converged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SlrFit {
    pub model: SlrModel,
    pub diagnostics: FitDiagnostics,
}

pub fn fit_balance_glm(b: &[f64], y: &[f64], family: Family) -> Result<BalanceGlm> {
    if b.len() != y.len() {
        return Err(Error::LengthMismatch(b.len(), y.len()));
    }
    if b.len() < 3 {
        return Err(Error::TooFewSamples {
            needed: 3,
            got: b.len(),
        });
    }
    let fit = glm::fit_simple(b, y, family).ok_or(Error::ConstantBalance)?;
    Ok(BalanceGlm {
        theta0: fit.intercept,
        theta1: fit.slope,
        converged: fit.converged,
    })
}

pub fn fit_slr(
    x: &CompositionMatrix,
    y: &[f64],
    m: usize,
    family: Family,
    method: ClusterMethod,
) -> Result<SlrFit> {
    let effects = univariate_effects(x, y, family)?;
    fit_slr_screened(x, y, &effects, m, method)
}

/// [`fit_slr`] with the screening statistics already computed on `(x, y)`.
/// Lets cross-validation screen once per fold and reuse it across sizes.
pub fn fit_slr_screened(
    x: &CompositionMatrix,
    y: &[f64],
    effects: &UnivariateEffects,
    m: usize,
    method: ClusterMethod,
) -> Result<SlrFit> {
    let family = effects.family;
    validate_response(y, x.n(), family)?;
    if effects.psi.len() != x.p() {
        return Err(Error::DimensionMismatch {
            expected: x.p(),
            got: effects.psi.len(),
        });
    }
    let screened = top_m_indices(effects, m)?;
    let variation = variation_matrix(x, &screened)?;
    let clusters = cluster_two(&variation, method)?;
    let partition = BalancePartition::new(clusters.group_a, clusters.group_b)?;
    let b = x.balances(&partition)?;
    let fit = fit_balance_glm(&b, y, family)?;
    let (partition, theta1) = if fit.theta1 < 0.0 {
        (partition.swapped(), -fit.theta1)
    } else {
        (partition, fit.theta1)
    };
    Ok(SlrFit {
        model: SlrModel {
            partition,
            theta0: fit.theta0,
            theta1,
            family,
            m,
            feature_names: x.feature_names().to_vec(),
        },
        diagnostics: FitDiagnostics {
            screened,
            constant_columns: effects.constant_columns.clone(),
            screening_nonconverged: effects.nonconverged.len(),
            degenerate_split: clusters.degenerate,
            glm_converged: fit.converged,
        },
    })
}

impl SlrModel {
    /// Linear predictor `theta0 + theta1 * B(x)` for every row.
    pub fn linear_predictor(&self, x: &CompositionMatrix) -> Result<Vec<f64>> {
        if x.p() != self.feature_names.len() {
            return Err(Error::DimensionMismatch {
                expected: self.feature_names.len(),
                got: x.p(),
            });
        }
        Ok(x.balances(&self.partition)?
            .into_iter()
            .map(|b| self.theta0 + self.theta1 * b)
            .collect())
    }

    /// Fitted means: the linear predictor (Gaussian) or a probability (Binomial).
    pub fn predict(&self, x: &CompositionMatrix) -> Result<Vec<f64>> {
        let eta = self.linear_predictor(x)?;
        Ok(match self.family {
            Family::Gaussian => eta,
            Family::Binomial => eta.into_iter().map(glm::logistic).collect(),
        })
    }

    /// Log-contrast coefficients: `theta1/|I+|` on I+, `-theta1/|I-|` on I-.
    pub fn to_beta(&self, p: usize) -> Vec<f64> {
        to_beta(&self.partition, self.theta1, p)
    }
}

pub fn predict(model: &SlrModel, x: &CompositionMatrix) -> Result<Vec<f64>> {
    model.predict(x)
}

pub fn to_beta(partition: &BalancePartition, theta1: f64, p: usize) -> Vec<f64> {
    let mut beta = vec![0.0; p];
    if theta1 == 0.0 {
        return beta;
    }
    let up = theta1 / partition.plus().len() as f64;
    let down = theta1 / partition.minus().len() as f64;
    for &j in partition.plus() {
        beta[j] = up;
    }
    for &j in partition.minus() {
        beta[j] = -down;
    }
    beta
}
