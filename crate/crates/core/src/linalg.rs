//! Dense symmetric eigendecomposition by cyclic Jacobi rotations.

/// Eigenpairs of a symmetric matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct SymEigen {
    pub values: Vec<f64>,
    /// Column-major: eigenvector `k` is `vectors[k * n..(k + 1) * n]`.
    pub vectors: Vec<f64>,
    pub dim: usize,
    pub sweeps: usize,
}

impl SymEigen {
    pub fn vector(&self, k: usize) -> &[f64] {
        &self.vectors[k * self.dim..(k + 1) * self.dim]
    }
}

const MAX_SWEEPS: usize = 100;

/// Cyclic Jacobi on a row-major symmetric `n x n` matrix.
///
/// Sweeps until the off-diagonal Frobenius norm falls below `tol` times the
/// full norm (or is exactly zero). Ties among eigenvalues keep the order of
/// the diagonal they converged on, so the output is deterministic.
pub fn symmetric_eigen(matrix: &[f64], n: usize, tol: f64) -> SymEigen {
    assert_eq!(matrix.len(), n * n, "matrix must be n x n");
    let mut a = matrix.to_vec();
    // row-major accumulator; column k holds eigenvector k
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let total: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let mut sweeps = 0;
    while sweeps < MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j] * a[i * n + j])
            .sum::<f64>()
            .sqrt();
        if off == 0.0 || off <= tol * total {
            break;
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].total_cmp(&a[j * n + j]).then(i.cmp(&j)));
    let values = order.iter().map(|&i| a[i * n + i]).collect();
    let mut vectors = Vec::with_capacity(n * n);
    for &k in &order {
        vectors.extend((0..n).map(|i| v[i * n + k]));
    }
    SymEigen {
        values,
        vectors,
        dim: n,
        sweeps,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn residual(m: &[f64], n: usize, lambda: f64, x: &[f64]) -> f64 {
        (0..n)
            .map(|i| {
                let row: f64 = (0..n).map(|j| m[i * n + j] * x[j]).sum();
                (row - lambda * x[i]).powi(2)
            })
            .sum::<f64>()
            .sqrt()
    }

    #[test]
    fn diagonal_is_already_converged() {
        let m = [3.0, 0.0, 0.0, 1.0];
        let e = symmetric_eigen(&m, 2, 1e-12);
        assert_eq!(e.values, vec![1.0, 3.0]);
        assert_eq!(e.sweeps, 0);
        assert_eq!(e.vector(0), &[0.0, 1.0]);
    }

    #[test]
    fn two_by_two() {
        let m = [2.0, 1.0, 1.0, 2.0];
        let e = symmetric_eigen(&m, 2, 1e-12);
        assert!((e.values[0] - 1.0).abs() < 1e-14);
        assert!((e.values[1] - 3.0).abs() < 1e-14);
        for k in 0..2 {
            assert!(residual(&m, 2, e.values[k], e.vector(k)) < 1e-12);
        }
    }

    #[test]
    fn path_graph_laplacian() {
        // path 0-1-2-3: eigenvalues 2 - 2cos(k pi / 4)
        let m = [
            1.0, -1.0, 0.0, 0.0, -1.0, 2.0, -1.0, 0.0, 0.0, -1.0, 2.0, -1.0, 0.0, 0.0, -1.0, 1.0,
        ];
        let e = symmetric_eigen(&m, 4, 1e-12);
        for k in 0..4 {
            let expected = 2.0 - 2.0 * (k as f64 * std::f64::consts::PI / 4.0).cos();
            assert!((e.values[k] - expected).abs() < 1e-12);
            assert!(residual(&m, 4, e.values[k], e.vector(k)) < 1e-10);
        }
        // orthonormal basis
        for a in 0..4 {
            for b in 0..4 {
                let dot: f64 = e.vector(a).iter().zip(e.vector(b)).map(|(x, y)| x * y).sum();
                let target = if a == b { 1.0 } else { 0.0 };
                assert!((dot - target).abs() < 1e-12);
            }
        }
    }
}
