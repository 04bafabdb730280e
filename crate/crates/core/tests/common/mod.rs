#![allow(dead_code)]

use rand::Rng;
use slr_core::rng::stream_rng;
use slr_core::simgen::{simulate_dataset, SimConfig};
use slr_core::{CompositionMatrix, Family};

/// Random strictly positive raw abundances (log-normal), n x p.
pub fn random_raw(n: usize, p: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = stream_rng(seed, 99);
    (0..n)
        .map(|_| {
            (0..p)
                .map(|_| (rng.random::<f64>() * 4.0 - 2.0).exp())
                .collect()
        })
        .collect()
}

pub fn rescale_rows(rows: &[Vec<f64>], seed: u64) -> Vec<Vec<f64>> {
    let mut rng = stream_rng(seed, 7);
    rows.iter()
        .map(|r| {
            let c = (rng.random::<f64>() * 10.0 - 5.0).exp();
            r.iter().map(|v| v * c).collect()
        })
        .collect()
}

pub fn noiseless_case_i(n: usize, seed: u64) -> (CompositionMatrix, Vec<f64>) {
    let mut cfg = SimConfig::case_i(Family::Gaussian, seed);
    cfg.n = n;
    cfg.sigma_eps = 0.0;
    cfg.sigma_y = 0.0;
    let d = simulate_dataset(&cfg).unwrap();
    (d.x, d.y)
}

pub fn raw_rows(x: &CompositionMatrix) -> Vec<Vec<f64>> {
    x.rows().map(|r| r.to_vec()).collect()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}
