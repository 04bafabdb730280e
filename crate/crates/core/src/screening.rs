//! Univariate screening of clr-transformed variables.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coda::CompositionMatrix;
use crate::error::{Error, Result};
use crate::glm::{self, Family};

/// Per-variable univariate coefficients on the clr scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnivariateEffects {
    pub psi: Vec<f64>,
    pub family: Family,
    /// Columns with (numerically) zero variance; their coefficient is 0.
    pub constant_columns: Vec<usize>,
    /// Binomial columns whose IRLS fit hit the iteration cap.
    pub nonconverged: Vec<usize>,
}

/// Checks a response vector against `n` and the family's support.
pub fn validate_response(y: &[f64], n: usize, family: Family) -> Result<()> {
    if y.len() != n {
        return Err(Error::ResponseLength {
            expected: n,
            got: y.len(),
        });
    }
    if let Some(index) = y.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite(index));
    }
    if family == Family::Binomial {
        if let Some((index, &value)) = y
            .iter()
            .enumerate()
            .find(|(_, &v)| v != 0.0 && v != 1.0)
        {
            return Err(Error::NotBinary { index, value });
        }
        let ones = y.iter().filter(|&&v| v == 1.0).count();
        if ones == 0 || ones == y.len() {
            return Err(Error::OneClassOnly);
        }
    }
    Ok(())
}

/// Univariate effect of each clr coordinate on `y`.
///
/// Gaussian: the least-squares slope `(y - ybar)'(z - zbar) / ||z - zbar||^2`.
/// Binomial: the slope of an intercept + slope logistic fit.
pub fn univariate_effects(
    x: &CompositionMatrix,
    y: &[f64],
    family: Family,
) -> Result<UnivariateEffects> {
    let n = x.n();
    if n < 3 {
        return Err(Error::TooFewSamples { needed: 3, got: n });
    }
    validate_response(y, n, family)?;
    let p = x.p();
    let z = x.clr();
    let columns: Vec<Vec<f64>> = (0..p)
        .map(|j| (0..n).map(|i| z[i * p + j]).collect())
        .collect();

    let fits: Vec<Option<glm::SimpleFit>> = columns
        .par_iter()
        .map(|col| glm::fit_simple(col, y, family))
        .collect();

    let mut psi = Vec::with_capacity(p);
    let mut constant_columns = Vec::new();
    let mut nonconverged = Vec::new();
    for (j, fit) in fits.into_iter().enumerate() {
        match fit {
            Some(f) => {
                if !f.converged {
                    nonconverged.push(j);
                }
                psi.push(f.slope);
            }
            None => {
                constant_columns.push(j);
                psi.push(0.0);
            }
        }
    }
    Ok(UnivariateEffects {
        psi,
        family,
        constant_columns,
        nonconverged,
    })
}

/// Indices of the `m` largest `|psi|`, ties broken by ascending index.
/// The result is sorted ascending.
pub fn top_m_indices(effects: &UnivariateEffects, m: usize) -> Result<Vec<usize>> {
    let p = effects.psi.len();
    if m < 2 {
        return Err(Error::MTooSmall(m));
    }
    if m > p {
        return Err(Error::MTooLarge { m, p });
    }
    let mut order: Vec<usize> = (0..p).collect();
    order.sort_by(|&a, &b| {
        effects.psi[b]
            .abs()
            .total_cmp(&effects.psi[a].abs())
            .then(a.cmp(&b))
    });
    let mut keep = order[..m].to_vec();
    keep.sort_unstable();
    Ok(keep)
}
