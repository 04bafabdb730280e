//! Intercept + slope generalized linear models on a single predictor.

use serde::{Deserialize, Serialize};

/// Response family. The binomial link is logit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Gaussian,
    Binomial,
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Family::Gaussian => write!(f, "gaussian"),
            Family::Binomial => write!(f, "binomial"),
        }
    }
}

impl std::str::FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "gaussian" => Ok(Family::Gaussian),
            "binomial" => Ok(Family::Binomial),
            other => Err(format!("unknown family {other:?}")),
        }
    }
}

pub const IRLS_MAX_ITER: usize = 25;
pub const IRLS_TOL: f64 = 1e-8;
/// Below this RMS deviation a predictor is treated as constant.
pub const CONSTANT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimpleFit {
    pub intercept: f64,
    pub slope: f64,
    pub converged: bool,
    pub iterations: usize,
}

pub fn logistic(eta: f64) -> f64 {
    if eta >= 0.0 {
        1.0 / (1.0 + (-eta).exp())
    } else {
        let e = eta.exp();
        e / (1.0 + e)
    }
}

pub(crate) fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// Centered sum of squares, or `None` when the RMS deviation is below [`CONSTANT_TOL`].
pub(crate) fn centered_ss(x: &[f64]) -> Option<(f64, f64)> {
    let mx = mean(x);
    let ss: f64 = x.iter().map(|v| (v - mx) * (v - mx)).sum();
    if (ss / x.len() as f64).sqrt() < CONSTANT_TOL {
        None
    } else {
        Some((mx, ss))
    }
}

/// Least squares of `y` on `(1, x)`. Returns `None` for a constant predictor.
pub fn ols(x: &[f64], y: &[f64]) -> Option<SimpleFit> {
    let (mx, sxx) = centered_ss(x)?;
    let my = mean(y);
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    Some(SimpleFit {
        intercept: my - slope * mx,
        slope,
        converged: true,
        iterations: 0,
    })
}

/// Logistic regression of 0/1 `y` on `(1, x)` by iteratively reweighted
/// least squares. Returns `None` for a constant predictor.
///
/// Stops when the largest coefficient update is below [`IRLS_TOL`]; after
/// [`IRLS_MAX_ITER`] iterations (typically quasi-separation) the last finite
/// iterate comes back with `converged = false`.
pub fn logistic_irls(x: &[f64], y: &[f64]) -> Option<SimpleFit> {
    centered_ss(x)?;
    let ybar = mean(y).clamp(1e-10, 1.0 - 1e-10);
    let mut b0 = (ybar / (1.0 - ybar)).ln();
    let mut b1 = 0.0;
    for iter in 1..=IRLS_MAX_ITER {
        // Newton step: (X'WX) delta = X'(y - mu)
        let (mut s0, mut s1, mut s2, mut g0, mut g1) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for (&xi, &yi) in x.iter().zip(y) {
            let mu = logistic(b0 + b1 * xi);
            let w = (mu * (1.0 - mu)).max(1e-12);
            s0 += w;
            s1 += w * xi;
            s2 += w * xi * xi;
            g0 += yi - mu;
            g1 += (yi - mu) * xi;
        }
        let det = s0 * s2 - s1 * s1;
        if !(det.is_finite() && det > 0.0) {
            return Some(SimpleFit {
                intercept: b0,
                slope: b1,
                converged: false,
                iterations: iter,
            });
        }
        let d0 = (s2 * g0 - s1 * g1) / det;
        let d1 = (s0 * g1 - s1 * g0) / det;
        if !(d0.is_finite() && d1.is_finite()) {
            return Some(SimpleFit {
                intercept: b0,
                slope: b1,
                converged: false,
                iterations: iter,
            });
        }
        b0 += d0;
        b1 += d1;
        if d0.abs().max(d1.abs()) < IRLS_TOL {
            return Some(SimpleFit {
                intercept: b0,
                slope: b1,
                converged: true,
                iterations: iter,
            });
        }
    }
    Some(SimpleFit {
        intercept: b0,
        slope: b1,
        converged: false,
        iterations: IRLS_MAX_ITER,
    })
}

pub fn fit_simple(x: &[f64], y: &[f64], family: Family) -> Option<SimpleFit> {
    match family {
        Family::Gaussian => ols(x, y),
        Family::Binomial => logistic_irls(x, y),
    }
}

/// Binomial deviance `-2 sum [y log mu + (1-y) log(1-mu)]` of linear predictors `eta`.
pub fn binomial_deviance(eta: &[f64], y: &[f64]) -> f64 {
    // log(1 + e^eta) computed stably
    let softplus = |t: f64| if t > 0.0 { t + (-t).exp().ln_1p() } else { t.exp().ln_1p() };
    2.0 * eta
        .iter()
        .zip(y)
        .map(|(&e, &yi)| softplus(e) - yi * e)
        .sum::<f64>()
}
