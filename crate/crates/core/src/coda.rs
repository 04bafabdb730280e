//! Simplex data types and log-ratio transforms.
//!
//! Everything here works on strictly positive compositions. Zero handling
//! (pseudocounts) is the caller's job; [`closure`] rejects zeros outright.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on the unit-sum constraint of a [`Composition`].
pub const SIMPLEX_TOL: f64 = 1e-9;

/// A strictly positive vector of proportions summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct Composition {
    values: Vec<f64>,
}

impl Composition {
    /// Wraps already-closed proportions, checking positivity and unit sum.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        check_parts(&values)?;
        let sum: f64 = values.iter().sum();
        if (sum - 1.0).abs() > SIMPLEX_TOL {
            return Err(Error::NotOnSimplex(sum));
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.values
    }
}

fn check_parts(values: &[f64]) -> Result<()> {
    if values.len() < 2 {
        return Err(Error::TooShort(values.len()));
    }
    for (index, &value) in values.iter().enumerate() {
        if !value.is_finite() {
            return Err(Error::NonFinite(index));
        }
        if value <= 0.0 {
            return Err(Error::ZeroEntry { index, value });
        }
    }
    Ok(())
}

/// Normalizes a strictly positive vector to unit sum.
pub fn closure(raw: &[f64]) -> Result<Composition> {
    check_parts(raw)?;
    let sum: f64 = raw.iter().sum();
    if !sum.is_finite() {
        return Err(Error::Overflow(0));
    }
    Ok(Composition {
        values: raw.iter().map(|v| v / sum).collect(),
    })
}

/// Centered log-ratio transform: `log x_j - mean_k log x_k`.
pub fn clr(x: &Composition) -> Vec<f64> {
    clr_slice(x.values())
}

pub(crate) fn clr_slice(x: &[f64]) -> Vec<f64> {
    let logs: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let mean = logs.iter().sum::<f64>() / logs.len() as f64;
    logs.into_iter().map(|l| l - mean).collect()
}

/// Additive log-ratio transform with the last component as reference.
pub fn alr(x: &Composition) -> Vec<f64> {
    let v = x.values();
    let reference = v[v.len() - 1].ln();
    v[..v.len() - 1].iter().map(|x| x.ln() - reference).collect()
}

/// Inverse additive log-ratio transform; the implicit reference coordinate is 0.
///
/// Exponents are shifted by `max(w, 0)` before evaluation, so large inputs
/// don't overflow. An error is returned only when some component underflows
/// to an exact zero.
pub fn inv_alr(w: &[f64]) -> Result<Composition> {
    if w.is_empty() {
        return Err(Error::TooShort(1));
    }
    if let Some(index) = w.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite(index));
    }
    let shift = w.iter().copied().fold(0.0_f64, f64::max);
    let mut values: Vec<f64> = w.iter().map(|v| (v - shift).exp()).collect();
    values.push((-shift).exp());
    let denom: f64 = values.iter().sum();
    for (j, v) in values.iter_mut().enumerate() {
        *v /= denom;
        if *v <= 0.0 {
            return Err(Error::Overflow(j));
        }
    }
    Ok(Composition { values })
}

/// The pair `(I+, I-)` of disjoint, nonempty index sets defining a balance.
///
/// Both sets are stored sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BalancePartition {
    plus: Vec<usize>,
    minus: Vec<usize>,
}

impl BalancePartition {
    pub fn new(mut plus: Vec<usize>, mut minus: Vec<usize>) -> Result<Self> {
        if plus.is_empty() || minus.is_empty() {
            return Err(Error::InvalidPartition("both groups must be nonempty".into()));
        }
        plus.sort_unstable();
        minus.sort_unstable();
        if plus.windows(2).any(|w| w[0] == w[1]) || minus.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidPartition("duplicate index within a group".into()));
        }
        if let Some(shared) = plus.iter().find(|i| minus.binary_search(i).is_ok()) {
            return Err(Error::InvalidPartition(format!(
                "index {shared} appears in both groups"
            )));
        }
        Ok(Self { plus, minus })
    }

    /// Like [`BalancePartition::new`] but also checks every index against `p`.
    pub fn with_dim(plus: Vec<usize>, minus: Vec<usize>, p: usize) -> Result<Self> {
        let part = Self::new(plus, minus)?;
        part.check_dim(p)?;
        Ok(part)
    }

    pub fn check_dim(&self, p: usize) -> Result<()> {
        match self.plus.iter().chain(&self.minus).find(|&&i| i >= p) {
            Some(&index) => Err(Error::IndexOutOfRange { index, p }),
            None => Ok(()),
        }
    }

    pub fn plus(&self) -> &[usize] {
        &self.plus
    }

    pub fn minus(&self) -> &[usize] {
        &self.minus
    }

    /// Exchanges numerator and denominator.
    pub fn swapped(&self) -> Self {
        Self {
            plus: self.minus.clone(),
            minus: self.plus.clone(),
        }
    }

    /// Number of variables with a nonzero loading.
    pub fn support_size(&self) -> usize {
        self.plus.len() + self.minus.len()
    }

    /// Maps indices through `map` (e.g. from a screened subset back to the full set).
    pub fn remap(&self, map: &[usize]) -> Result<Self> {
        let lookup = |v: &[usize]| -> Result<Vec<usize>> {
            v.iter()
                .map(|&i| {
                    map.get(i).copied().ok_or(Error::IndexOutOfRange {
                        index: i,
                        p: map.len(),
                    })
                })
                .collect()
        };
        Self::new(lookup(&self.plus)?, lookup(&self.minus)?)
    }
}

/// Balance value `mean_{I+} log x - mean_{I-} log x`, without the
/// normalizing constant of an orthonormal basis.
pub fn balance(x: &Composition, part: &BalancePartition) -> Result<f64> {
    part.check_dim(x.len())?;
    Ok(balance_unchecked(x.values(), part))
}

pub(crate) fn balance_unchecked(x: &[f64], part: &BalancePartition) -> f64 {
    let mean_log =
        |idx: &[usize]| idx.iter().map(|&j| x[j].ln()).sum::<f64>() / idx.len() as f64;
    mean_log(part.plus()) - mean_log(part.minus())
}

/// n samples on a common simplex, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CompositionMatrix {
    n: usize,
    p: usize,
    data: Vec<f64>,
    feature_names: Vec<String>,
}

/// Default labels `x1..xp`.
pub fn default_feature_names(p: usize) -> Vec<String> {
    (1..=p).map(|j| format!("x{j}")).collect()
}

impl CompositionMatrix {
    /// Closes every raw row onto the simplex.
    pub fn from_raw_rows(rows: &[Vec<f64>], feature_names: Option<Vec<String>>) -> Result<Self> {
        let first = rows.first().ok_or(Error::Empty)?;
        let p = first.len();
        let mut data = Vec::with_capacity(rows.len() * p);
        for (row, raw) in rows.iter().enumerate() {
            if raw.len() != p {
                return Err(Error::RaggedRows {
                    row,
                    expected: p,
                    got: raw.len(),
                });
            }
            data.extend(closure(raw)?.into_vec());
        }
        Self::assemble(rows.len(), p, data, feature_names)
    }

    pub fn from_compositions(
        rows: Vec<Composition>,
        feature_names: Option<Vec<String>>,
    ) -> Result<Self> {
        let p = rows.first().ok_or(Error::Empty)?.len();
        let n = rows.len();
        let mut data = Vec::with_capacity(n * p);
        for (row, comp) in rows.into_iter().enumerate() {
            if comp.len() != p {
                return Err(Error::RaggedRows {
                    row,
                    expected: p,
                    got: comp.len(),
                });
            }
            data.extend(comp.into_vec());
        }
        Self::assemble(n, p, data, feature_names)
    }

    fn assemble(
        n: usize,
        p: usize,
        data: Vec<f64>,
        feature_names: Option<Vec<String>>,
    ) -> Result<Self> {
        if p < 2 {
            return Err(Error::TooShort(p));
        }
        let feature_names = feature_names.unwrap_or_else(|| default_feature_names(p));
        if feature_names.len() != p {
            return Err(Error::FeatureNames(format!(
                "{} names for {p} parts",
                feature_names.len()
            )));
        }
        let mut seen = std::collections::HashSet::new();
        for name in &feature_names {
            if !seen.insert(name.as_str()) {
                return Err(Error::FeatureNames(format!("duplicate name {name:?}")));
            }
        }
        Ok(Self {
            n,
            p,
            data,
            feature_names,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.p..(i + 1) * self.p]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.p)
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    /// Subset of samples, in the given order.
    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let mut data = Vec::with_capacity(idx.len() * self.p);
        for &i in idx {
            data.extend_from_slice(self.row(i));
        }
        Self {
            n: idx.len(),
            p: self.p,
            data,
            feature_names: self.feature_names.clone(),
        }
    }

    /// Subcomposition on the given variables, re-closed.
    pub fn select_columns(&self, cols: &[usize]) -> Result<Self> {
        if let Some(&index) = cols.iter().find(|&&j| j >= self.p) {
            return Err(Error::IndexOutOfRange { index, p: self.p });
        }
        let rows: Vec<Vec<f64>> = self
            .rows()
            .map(|r| cols.iter().map(|&j| r[j]).collect())
            .collect();
        let names = cols.iter().map(|&j| self.feature_names[j].clone()).collect();
        Self::from_raw_rows(&rows, Some(names))
    }

    /// Row-major n x p matrix of clr coordinates.
    pub fn clr(&self) -> Vec<f64> {
        self.rows().flat_map(clr_slice).collect()
    }

    /// Balance value of every sample.
    pub fn balances(&self, part: &BalancePartition) -> Result<Vec<f64>> {
        part.check_dim(self.p)?;
        Ok(self.rows().map(|r| balance_unchecked(r, part)).collect())
    }
}

/// Symmetric matrix of pairwise Aitchison variations over a variable subset.
#[derive(Debug, Clone, PartialEq)]
pub struct VariationMatrix {
    dim: usize,
    values: Vec<f64>,
    index_map: Vec<usize>,
}

impl VariationMatrix {
    /// Builds from a full row-major matrix; checks symmetry, zero diagonal and sign.
    pub fn from_values(values: Vec<f64>, index_map: Vec<usize>) -> Result<Self> {
        let dim = index_map.len();
        if dim < 2 {
            return Err(Error::SubsetTooSmall(dim));
        }
        if values.len() != dim * dim {
            return Err(Error::LengthMismatch(values.len(), dim * dim));
        }
        for j in 0..dim {
            if values[j * dim + j] != 0.0 {
                return Err(Error::InvalidConfig("variation diagonal must be zero".into()));
            }
            for k in 0..dim {
                let v = values[j * dim + k];
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::InvalidConfig(format!(
                        "variation entry ({j},{k}) = {v} is negative or not finite"
                    )));
                }
                if (v - values[k * dim + j]).abs() > 1e-12 {
                    return Err(Error::InvalidConfig("variation matrix is not symmetric".into()));
                }
            }
        }
        Ok(Self {
            dim,
            values,
            index_map,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, j: usize, k: usize) -> f64 {
        self.values[j * self.dim + k]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Original variable index of each row/column.
    pub fn index_map(&self) -> &[usize] {
        &self.index_map
    }

    pub fn max_entry(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }
}

/// Variation matrix `(1/n) sum_i (log(x_ij/x_ik) - mean)^2` over `subset`.
///
/// The divisor is n, not n - 1.
pub fn variation_matrix(x: &CompositionMatrix, subset: &[usize]) -> Result<VariationMatrix> {
    let m = subset.len();
    if m < 2 {
        return Err(Error::SubsetTooSmall(m));
    }
    if x.n() < 2 {
        return Err(Error::TooFewSamples {
            needed: 2,
            got: x.n(),
        });
    }
    if let Some(&index) = subset.iter().find(|&&j| j >= x.p()) {
        return Err(Error::IndexOutOfRange { index, p: x.p() });
    }
    let n = x.n();
    // column-major logs of the subset
    let mut logs = vec![0.0; m * n];
    for (i, row) in x.rows().enumerate() {
        for (a, &j) in subset.iter().enumerate() {
            logs[a * n + i] = row[j].ln();
        }
    }
    let mut values = vec![0.0; m * m];
    for a in 0..m {
        for b in (a + 1)..m {
            let (la, lb) = (&logs[a * n..(a + 1) * n], &logs[b * n..(b + 1) * n]);
            // shift by the first log-ratio; exact zero for constant ratios
            let origin = la[0] - lb[0];
            let mut sum = 0.0;
            let mut sumsq = 0.0;
            for i in 0..n {
                let d = (la[i] - lb[i]) - origin;
                sum += d;
                sumsq += d * d;
            }
            let mean = sum / n as f64;
            let var = (sumsq / n as f64 - mean * mean).max(0.0);
            values[a * m + b] = var;
            values[b * m + a] = var;
        }
    }
    Ok(VariationMatrix {
        dim: m,
        values,
        index_map: subset.to_vec(),
    })
}
