//! Two-group clustering of variables from their variation matrix.

use serde::{Deserialize, Serialize};

use crate::coda::VariationMatrix;
use crate::error::{Error, Result};
use crate::linalg::symmetric_eigen;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClusterMethod {
    /// Agglomerative, complete linkage, cut at two clusters.
    Hierarchical,
    /// Sign split of the Fiedler vector of the unnormalized Laplacian.
    Spectral,
}

impl std::fmt::Display for ClusterMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ClusterMethod::Hierarchical => write!(f, "hierarchical"),
            ClusterMethod::Spectral => write!(f, "spectral"),
        }
    }
}

impl std::str::FromStr for ClusterMethod {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "hierarchical" => Ok(ClusterMethod::Hierarchical),
            "spectral" => Ok(ClusterMethod::Spectral),
            other => Err(format!("unknown cluster method {other:?}")),
        }
    }
}

pub const EIGEN_TOL: f64 = 1e-12;

/// Two disjoint groups of original variable indices.
///
/// `group_a` always holds the first variable of the matrix's index map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoClusterResult {
    pub group_a: Vec<usize>,
    pub group_b: Vec<usize>,
    pub method: ClusterMethod,
    /// Spectral only: the Fiedler vector had a single sign and the
    /// largest-magnitude variable was split off on its own.
    pub degenerate: bool,
}

pub fn cluster_two(a: &VariationMatrix, method: ClusterMethod) -> Result<TwoClusterResult> {
    let m = a.dim();
    if m < 2 {
        return Err(Error::SubsetTooSmall(m));
    }
    let (labels, degenerate) = match method {
        ClusterMethod::Hierarchical => (complete_linkage_two(a), false),
        ClusterMethod::Spectral => {
            let f = fiedler_vector(a);
            spectral_labels(&f.vector)
        }
    };
    // normalize so position 0 lands in group A
    let flip = !labels[0];
    let map = a.index_map();
    let mut group_a = Vec::new();
    let mut group_b = Vec::new();
    for (pos, &in_a) in labels.iter().enumerate() {
        if in_a != flip {
            group_a.push(map[pos]);
        } else {
            group_b.push(map[pos]);
        }
    }
    group_a.sort_unstable();
    group_b.sort_unstable();
    Ok(TwoClusterResult {
        group_a,
        group_b,
        method,
        degenerate,
    })
}

/// Complete-linkage agglomeration until two clusters remain.
///
/// Returns membership flags (true = same cluster as position 0). Among
/// equally close cluster pairs the one with the smallest member indices
/// merges first.
fn complete_linkage_two(a: &VariationMatrix) -> Vec<bool> {
    let m = a.dim();
    // clusters keyed by their smallest member; dist holds linkage distances
    let mut members: Vec<Option<Vec<usize>>> = (0..m).map(|i| Some(vec![i])).collect();
    let mut dist: Vec<f64> = a.values().to_vec();
    let mut active = m;
    while active > 2 {
        let mut best: Option<(f64, usize, usize)> = None;
        for i in 0..m {
            if members[i].is_none() {
                continue;
            }
            for j in (i + 1)..m {
                if members[j].is_none() {
                    continue;
                }
                let d = dist[i * m + j];
                if best.is_none_or(|(bd, _, _)| d < bd) {
                    best = Some((d, i, j));
                }
            }
        }
        let (_, i, j) = best.expect("at least two active clusters");
        let absorbed = members[j].take().expect("active cluster");
        members[i].as_mut().expect("active cluster").extend(absorbed);
        for k in 0..m {
            if k != i && members[k].is_some() {
                let d = dist[i * m + k].max(dist[j * m + k]);
                dist[i * m + k] = d;
                dist[k * m + i] = d;
            }
        }
        active -= 1;
    }
    let first = members[0].as_ref().expect("position 0 keys its cluster");
    let mut labels = vec![false; m];
    for &i in first {
        labels[i] = true;
    }
    labels
}

/// Fiedler pair of the similarity graph `S = max(A) - A` (zero diagonal).
#[derive(Debug, Clone)]
pub struct Fiedler {
    pub value: f64,
    /// Unit norm, orthogonal to the all-ones vector, first nonzero entry positive.
    pub vector: Vec<f64>,
    pub laplacian: Vec<f64>,
}

/// Unnormalized Laplacian `D - S` with `S_jk = max(A) - A_jk` off the diagonal.
pub fn similarity_laplacian(a: &VariationMatrix) -> Vec<f64> {
    let m = a.dim();
    let top = a.max_entry();
    let mut lap = vec![0.0; m * m];
    for j in 0..m {
        let mut degree = 0.0;
        for k in 0..m {
            if j != k {
                let s = top - a.get(j, k);
                lap[j * m + k] = -s;
                degree += s;
            }
        }
        lap[j * m + j] = degree;
    }
    lap
}

pub fn fiedler_vector(a: &VariationMatrix) -> Fiedler {
    let m = a.dim();
    let laplacian = similarity_laplacian(a);
    // Lift the constant eigenvector above the spectrum so the smallest
    // eigenpair of the shifted matrix is the Fiedler pair, even when the
    // graph is disconnected.
    let trace: f64 = (0..m).map(|j| laplacian[j * m + j]).sum();
    let lift = (trace + 1.0) / m as f64;
    let shifted: Vec<f64> = laplacian.iter().map(|v| v + lift).collect();
    let eig = symmetric_eigen(&shifted, m, EIGEN_TOL);
    let mut vector = eig.vector(0).to_vec();
    // remove any residual constant component and renormalize
    let mean = vector.iter().sum::<f64>() / m as f64;
    vector.iter_mut().for_each(|v| *v -= mean);
    let norm = vector.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm > 0.0 {
        vector.iter_mut().for_each(|v| *v /= norm);
    }
    let scale = vector.iter().map(|v| v.abs()).fold(0.0, f64::max);
    if let Some(first) = vector.iter().find(|v| v.abs() > 1e-10 * scale) {
        if *first < 0.0 {
            vector.iter_mut().for_each(|v| *v = -*v);
        }
    }
    Fiedler {
        value: eig.values[0],
        vector,
        laplacian,
    }
}

/// Positive entries form one group, the rest the other. A single-sign
/// vector splits off its largest-magnitude entry.
fn spectral_labels(v: &[f64]) -> (Vec<bool>, bool) {
    let labels: Vec<bool> = v.iter().map(|&x| x > 0.0).collect();
    let positives = labels.iter().filter(|&&l| l).count();
    if positives == 0 || positives == labels.len() {
        let (imax, _) = v
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |(bi, bv), (i, &x)| {
                if x.abs() > bv {
                    (i, x.abs())
                } else {
                    (bi, bv)
                }
            });
        let labels = (0..v.len()).map(|i| i == imax).collect();
        return (labels, true);
    }
    (labels, false)
}
