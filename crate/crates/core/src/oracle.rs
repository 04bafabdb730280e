//! Exhaustive best-balance search for small p.
//!
//! Every assignment of variables to {numerator, denominator, unused} with both
//! groups nonempty is fitted, up to the numerator/denominator swap, which the
//! GLM slope absorbs. There are `(3^p - 2^(p+1) + 1) / 2` such candidates.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coda::{BalancePartition, CompositionMatrix};
use crate::error::{Error, Result};
use crate::glm::{self, Family};
use crate::screening::validate_response;

pub const DEFAULT_MAX_P: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    /// Best partition, oriented so that `theta1 >= 0`.
    pub partition: BalancePartition,
    pub theta0: f64,
    pub theta1: f64,
    /// Residual sum of squares (Gaussian) or deviance (Binomial).
    pub criterion: f64,
    /// Candidates whose criterion is within tolerance of the optimum.
    pub ties: usize,
    pub candidates: usize,
}

/// Closed-form number of candidate partitions for `p` variables.
pub fn candidate_count(p: usize) -> u64 {
    (3u64.pow(p as u32) - 2u64.pow(p as u32 + 1)).div_ceil(2)
}

/// Canonical partitions for `p` variables: the smallest used index is in the numerator.
pub fn enumerate_partitions(p: usize) -> Vec<BalancePartition> {
    let total = 3u64.pow(p as u32);
    (0..total).filter_map(|code| decode(code, p)).collect()
}

fn decode(mut code: u64, p: usize) -> Option<BalancePartition> {
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    for j in 0..p {
        match code % 3 {
            1 => plus.push(j),
            2 => {
                if plus.is_empty() {
                    // first used variable must be in the numerator
                    return None;
                }
                minus.push(j);
            }
            _ => {}
        }
        code /= 3;
    }
    if plus.is_empty() || minus.is_empty() {
        return None;
    }
    Some(BalancePartition::new(plus, minus).expect("disjoint by construction"))
}

#[derive(Debug, Clone)]
struct Scored {
    partition: BalancePartition,
    theta0: f64,
    theta1: f64,
    criterion: f64,
}

impl Scored {
    /// `theta1^2 (1/|I+| + 1/|I-|)`: how strongly iid log-scale noise in the
    /// parts is amplified into the residual. Among exact ties this picks the
    /// partition that stays optimal as noise vanishes.
    fn amplification(&self) -> f64 {
        let gap = 1.0 / self.partition.plus().len() as f64
            + 1.0 / self.partition.minus().len() as f64;
        self.theta1 * self.theta1 * gap
    }
}

fn score(
    logs: &[f64],
    p: usize,
    y: &[f64],
    family: Family,
    partition: BalancePartition,
    null: (f64, f64),
) -> Scored {
    let n = y.len();
    let mean_of = |row: &[f64], idx: &[usize]| {
        idx.iter().map(|&j| row[j]).sum::<f64>() / idx.len() as f64
    };
    let b: Vec<f64> = (0..n)
        .map(|i| {
            let row = &logs[i * p..(i + 1) * p];
            mean_of(row, partition.plus()) - mean_of(row, partition.minus())
        })
        .collect();
    let Some(fit) = glm::fit_simple(&b, y, family) else {
        // constant balance: only the intercept is identifiable
        return Scored {
            partition,
            theta0: null.0,
            theta1: 0.0,
            criterion: null.1,
        };
    };
    let eta: Vec<f64> = b.iter().map(|bi| fit.intercept + fit.slope * bi).collect();
    let criterion = match family {
        Family::Gaussian => eta.iter().zip(y).map(|(e, yi)| (yi - e) * (yi - e)).sum(),
        Family::Binomial => glm::binomial_deviance(&eta, y),
    };
    Scored {
        partition,
        theta0: fit.intercept,
        theta1: fit.slope,
        criterion,
    }
}

fn null_model(y: &[f64], family: Family) -> (f64, f64) {
    let ybar = glm::mean(y);
    match family {
        Family::Gaussian => (ybar, y.iter().map(|v| (v - ybar) * (v - ybar)).sum()),
        Family::Binomial => {
            let eta0 = (ybar / (1.0 - ybar)).ln();
            (eta0, glm::binomial_deviance(&vec![eta0; y.len()], y))
        }
    }
}

/// Minimizes the in-sample one-balance GLM criterion over all partitions.
///
/// Criterion ties (within `1e-10` of the null criterion) are resolved by the
/// smallest noise amplification, then by the lexicographically smallest
/// `(I+, I-)` in canonical orientation.
pub fn exhaustive_best_balance(
    x: &CompositionMatrix,
    y: &[f64],
    family: Family,
    max_p: usize,
) -> Result<OracleResult> {
    let p = x.p();
    if p > max_p {
        return Err(Error::PTooLarge { p, max: max_p });
    }
    if x.n() < 3 {
        return Err(Error::TooFewSamples {
            needed: 3,
            got: x.n(),
        });
    }
    validate_response(y, x.n(), family)?;
    let logs: Vec<f64> = x.rows().flat_map(|r| r.iter().map(|v| v.ln())).collect();
    let null = null_model(y, family);

    let total = 3u64.pow(p as u32);
    let scored: Vec<Scored> = (0..total)
        .into_par_iter()
        .filter_map(|code| decode(code, p))
        .map(|part| score(&logs, p, y, family, part, null))
        .collect();

    let best_criterion = scored
        .iter()
        .map(|s| s.criterion)
        .fold(f64::INFINITY, f64::min);
    let tol = 1e-10 * (1.0 + null.1.abs());
    let tied: Vec<&Scored> = scored
        .iter()
        .filter(|s| s.criterion <= best_criterion + tol)
        .collect();
    let least_amp = tied
        .iter()
        .map(|s| s.amplification())
        .fold(f64::INFINITY, f64::min);
    let amp_tol = 1e-9 * (1.0 + least_amp);
    let winner = tied
        .iter()
        .filter(|s| s.amplification() <= least_amp + amp_tol)
        .min_by(|a, b| {
            a.partition
                .plus()
                .cmp(b.partition.plus())
                .then_with(|| a.partition.minus().cmp(b.partition.minus()))
        })
        .expect("p >= 2 yields at least one candidate");

    let (partition, theta1) = if winner.theta1 < 0.0 {
        (winner.partition.swapped(), -winner.theta1)
    } else {
        (winner.partition.clone(), winner.theta1)
    };
    Ok(OracleResult {
        partition,
        theta0: winner.theta0,
        theta1,
        criterion: winner.criterion,
        ties: tied.len(),
        candidates: scored.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(candidate_count(2), 1);
        assert_eq!(candidate_count(4), 25);
        for p in 2..=8 {
            assert_eq!(enumerate_partitions(p).len() as u64, candidate_count(p));
        }
        assert_eq!(
            enumerate_partitions(2),
            vec![BalancePartition::new(vec![0], vec![1]).unwrap()]
        );
    }

    #[test]
    fn enumeration_is_swap_free() {
        let parts = enumerate_partitions(5);
        let set: std::collections::HashSet<_> = parts.iter().cloned().collect();
        assert_eq!(set.len(), parts.len());
        for part in &parts {
            assert!(!set.contains(&part.swapped()));
        }
    }

    #[test]
    fn p_too_large() {
        let rows = vec![vec![1.0; 11]; 4];
        let x = CompositionMatrix::from_raw_rows(&rows, None).unwrap();
        assert!(matches!(
            exhaustive_best_balance(&x, &[0.0, 1.0, 2.0, 3.0], Family::Gaussian, 10),
            Err(Error::PTooLarge { p: 11, max: 10 })
        ));
    }

    #[test]
    fn recovers_planted_balance() {
        // y = log(x0 / x2) exactly; variable 1 is noise
        let rows: Vec<Vec<f64>> = (0..12)
            .map(|i| {
                let t = i as f64 * 0.37;
                vec![(t.sin()).exp(), (t * 1.7).cos().exp(), 1.0, (t * 0.3).exp()]
            })
            .collect();
        let x = CompositionMatrix::from_raw_rows(&rows, None).unwrap();
        let y: Vec<f64> = x.rows().map(|r| (r[0] / r[2]).ln()).collect();
        let r = exhaustive_best_balance(&x, &y, Family::Gaussian, 10).unwrap();
        assert_eq!(r.partition, BalancePartition::new(vec![0], vec![2]).unwrap());
        assert!(r.criterion < 1e-20);
        assert!((r.theta1 - 1.0).abs() < 1e-10);
        assert_eq!(r.candidates, 25);
    }
}
