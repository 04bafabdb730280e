//! Latent-variable generator for compositional predictors and responses.
//!
//! For each sample a latent `u ~ Uniform(-0.5, 0.5)` drives the alr
//! coordinates `w_j = alpha_j u + eps_j` (reference coordinate fixed at 0),
//! mapped to the simplex by inverse alr. The response is
//! `y = theta1 u + N(0, sigma_y^2)` or `Bernoulli(logistic(scale * u))`.

use rand::Rng as _;
use rand_distr::{Distribution, Normal, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::coda::{inv_alr, BalancePartition, CompositionMatrix};
use crate::error::{Error, Result};
use crate::glm::{logistic, Family};
use crate::rng::stream_rng;
use crate::slr::to_beta;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub n: usize,
    pub p: usize,
    pub plus_set: Vec<usize>,
    pub minus_set: Vec<usize>,
    /// Standard deviation of the per-coordinate noise.
    pub sigma_eps: f64,
    /// Standard deviation of the continuous response noise.
    pub sigma_y: f64,
    /// Effect of the latent variable on a continuous response.
    pub theta1_true: f64,
    /// Logistic scale of the latent variable for a binary response.
    pub binary_scale: f64,
    pub family: Family,
    pub seed: u64,
}

impl SimConfig {
    /// `I+ = {0,1,2}`, `I- = {3,4,5}`, n = 100, p = 30.
    pub fn case_i(family: Family, seed: u64) -> Self {
        Self {
            n: 100,
            p: 30,
            plus_set: vec![0, 1, 2],
            minus_set: vec![3, 4, 5],
            sigma_eps: 0.1,
            sigma_y: 0.1,
            theta1_true: 0.5,
            binary_scale: 6.0,
            family,
            seed,
        }
    }

    /// `I+ = {0,..,4}`, `I- = {5}`, n = 100, p = 30.
    pub fn case_ii(family: Family, seed: u64) -> Self {
        Self {
            plus_set: vec![0, 1, 2, 3, 4],
            minus_set: vec![5],
            ..Self::case_i(family, seed)
        }
    }

    pub fn validate(&self) -> Result<BalancePartition> {
        if self.p < 3 {
            return Err(Error::InvalidConfig(format!(
                "p = {} leaves no room for an inactive reference",
                self.p
            )));
        }
        if self.n == 0 {
            return Err(Error::InvalidConfig("n must be positive".into()));
        }
        let part = BalancePartition::new(self.plus_set.clone(), self.minus_set.clone())?;
        // the reference coordinate p - 1 must stay inactive
        part.check_dim(self.p - 1)?;
        for (name, v) in [("sigma_eps", self.sigma_eps), ("sigma_y", self.sigma_y)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::InvalidConfig(format!("{name} = {v} must be >= 0")));
            }
        }
        Ok(part)
    }

    /// Sum of the absolute loadings of the two groups.
    fn loading_gap(&self) -> f64 {
        1.0 / self.plus_set.len() as f64 + 1.0 / self.minus_set.len() as f64
    }

    /// Slope of the response on the true balance: latent effect over the loading gap.
    pub fn balance_effect(&self) -> f64 {
        let latent = match self.family {
            Family::Gaussian => self.theta1_true,
            Family::Binomial => self.binary_scale,
        };
        latent / self.loading_gap()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimDataset {
    pub x: CompositionMatrix,
    pub y: Vec<f64>,
    pub u: Vec<f64>,
    pub beta_true: Vec<f64>,
}

/// Loadings on the p - 1 non-reference coordinates:
/// `1/|I+|` on I+, `-1/|I-|` on I-, 0 elsewhere.
pub fn alpha_coefficients(p: usize, plus_set: &[usize], minus_set: &[usize]) -> Result<Vec<f64>> {
    if p < 2 {
        return Err(Error::TooShort(p));
    }
    let part = BalancePartition::new(plus_set.to_vec(), minus_set.to_vec())?;
    part.check_dim(p - 1)?;
    let mut alpha = vec![0.0; p - 1];
    let up = 1.0 / part.plus().len() as f64;
    let down = 1.0 / part.minus().len() as f64;
    for &j in part.plus() {
        alpha[j] = up;
    }
    for &j in part.minus() {
        alpha[j] = -down;
    }
    Ok(alpha)
}

/// Draws a dataset on stream 0 of `cfg.seed`.
pub fn simulate_dataset(cfg: &SimConfig) -> Result<SimDataset> {
    simulate_stream(cfg, 0)
}

/// Draws a dataset on an explicit RNG stream. Replication `r` of a study
/// uses its own stream, so replications can run in any order.
pub fn simulate_stream(cfg: &SimConfig, stream: u64) -> Result<SimDataset> {
    let part = cfg.validate()?;
    let alpha = alpha_coefficients(cfg.p, &cfg.plus_set, &cfg.minus_set)?;
    let mut rng = stream_rng(cfg.seed, stream);
    let n = cfg.n;

    let u: Vec<f64> = (0..n).map(|_| rng.random::<f64>() - 0.5).collect();
    let mut rows = Vec::with_capacity(n);
    let mut w = vec![0.0; cfg.p - 1];
    for &ui in &u {
        for (wj, &aj) in w.iter_mut().zip(&alpha) {
            let eps: f64 = StandardNormal.sample(&mut rng);
            *wj = aj * ui + cfg.sigma_eps * eps;
        }
        rows.push(inv_alr(&w)?);
    }
    let y: Vec<f64> = match cfg.family {
        Family::Gaussian => {
            let noise = Normal::new(0.0, cfg.sigma_y)
                .map_err(|e| Error::InvalidConfig(e.to_string()))?;
            u.iter()
                .map(|&ui| cfg.theta1_true * ui + noise.sample(&mut rng))
                .collect()
        }
        Family::Binomial => u
            .iter()
            .map(|&ui| {
                let prob = logistic(cfg.binary_scale * ui);
                if rng.random::<f64>() < prob {
                    1.0
                } else {
                    0.0
                }
            })
            .collect(),
    };
    let x = CompositionMatrix::from_compositions(rows, None)?;
    let beta_true = to_beta(&part, cfg.balance_effect(), cfg.p);
    Ok(SimDataset { x, y, u, beta_true })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_examples() {
        let a = alpha_coefficients(30, &[0, 1, 2], &[3, 4, 5]).unwrap();
        assert_eq!(a.len(), 29);
        for (j, v) in a.iter().enumerate() {
            let e = match j {
                0..=2 => 1.0 / 3.0,
                3..=5 => -1.0 / 3.0,
                _ => 0.0,
            };
            assert_eq!(*v, e);
        }
        let a = alpha_coefficients(30, &[0, 1, 2, 3, 4], &[5]).unwrap();
        assert!(a[..5].iter().all(|&v| v == 0.2));
        assert_eq!(a[5], -1.0);
        assert!(a[6..].iter().all(|&v| v == 0.0));
        assert_eq!(a.iter().sum::<f64>(), 0.0);
    }

    #[test]
    fn reference_must_be_inactive() {
        assert!(alpha_coefficients(6, &[0, 1, 2], &[3, 4, 5]).is_err());
        let mut cfg = SimConfig::case_i(Family::Gaussian, 1);
        cfg.p = 6;
        assert!(simulate_dataset(&cfg).is_err());
        let mut cfg = SimConfig::case_i(Family::Gaussian, 1);
        cfg.sigma_y = -1.0;
        assert!(simulate_dataset(&cfg).is_err());
    }

    #[test]
    fn rows_on_simplex_and_reproducible() {
        let cfg = SimConfig::case_i(Family::Gaussian, 42);
        let a = simulate_dataset(&cfg).unwrap();
        for row in a.x.rows() {
            assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        }
        let b = simulate_dataset(&cfg).unwrap();
        assert_eq!(a, b);
        let c = simulate_stream(&cfg, 1).unwrap();
        assert_ne!(a.y, c.y);
        assert!(a.beta_true.iter().sum::<f64>().abs() < 1e-12);
        assert_eq!(a.beta_true[0], 0.25);
    }

    #[test]
    fn noiseless_response_is_affine_in_true_balance() {
        let mut cfg = SimConfig::case_i(Family::Gaussian, 3);
        cfg.sigma_eps = 0.0;
        cfg.sigma_y = 0.0;
        let d = simulate_dataset(&cfg).unwrap();
        let part = BalancePartition::new(vec![0, 1, 2], vec![3, 4, 5]).unwrap();
        let b = d.x.balances(&part).unwrap();
        for (bi, yi) in b.iter().zip(&d.y) {
            assert!((yi - 0.75 * bi).abs() < 1e-12);
        }
    }

    #[test]
    fn binary_labels_are_01() {
        let d = simulate_dataset(&SimConfig::case_ii(Family::Binomial, 9)).unwrap();
        assert!(d.y.iter().all(|&v| v == 0.0 || v == 1.0));
        assert!(d.y.contains(&1.0) && d.y.contains(&0.0));
        // balance effect 6 / (1/5 + 1)
        assert!((d.beta_true[5] + 5.0).abs() < 1e-12);
    }
}
