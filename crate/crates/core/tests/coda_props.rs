mod common;

use proptest::prelude::*;
use slr_core::coda::{alr, balance, closure, clr, inv_alr, variation_matrix};
use slr_core::{BalancePartition, CompositionMatrix};

fn positive_vec(p: std::ops::Range<usize>) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-5.0f64..5.0, p).prop_map(|v| v.into_iter().map(f64::exp).collect())
}

proptest! {
    #[test]
    fn clr_sums_to_zero(raw in positive_vec(2..40)) {
        let z = clr(&closure(&raw).unwrap());
        prop_assert!(z.iter().sum::<f64>().abs() < 1e-12);
    }

    #[test]
    fn clr_and_balance_are_scale_invariant(raw in positive_vec(3..20), log_c in -20.0f64..20.0) {
        let c = log_c.exp();
        let scaled: Vec<f64> = raw.iter().map(|v| v * c).collect();
        let (a, b) = (closure(&raw).unwrap(), closure(&scaled).unwrap());
        prop_assert!(common::max_abs_diff(&clr(&a), &clr(&b)) < 1e-9);
        let part = BalancePartition::new(vec![0], vec![1, 2]).unwrap();
        prop_assert!((balance(&a, &part).unwrap() - balance(&b, &part).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn inv_alr_round_trip(w in prop::collection::vec(-30.0f64..30.0, 1..25)) {
        let x = inv_alr(&w).unwrap();
        prop_assert!((x.values().iter().sum::<f64>() - 1.0).abs() < 1e-9);
        let back = alr(&x);
        prop_assert!(common::max_abs_diff(&back, &w) < 1e-10);
    }

    #[test]
    fn clr_permutation_equivariance(raw in positive_vec(2..15), seed in any::<u64>()) {
        let p = raw.len();
        let mut perm: Vec<usize> = (0..p).collect();
        let mut s = seed;
        for i in (1..p).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        let permuted: Vec<f64> = perm.iter().map(|&j| raw[j]).collect();
        let z = clr(&closure(&raw).unwrap());
        let zp = clr(&closure(&permuted).unwrap());
        for (k, &j) in perm.iter().enumerate() {
            prop_assert!((zp[k] - z[j]).abs() < 1e-12);
        }
    }
}

#[test]
fn variation_matrix_scale_and_permutation() {
    let raw = common::random_raw(40, 8, 1);
    let x = CompositionMatrix::from_raw_rows(&raw, None).unwrap();
    let xs = CompositionMatrix::from_raw_rows(&common::rescale_rows(&raw, 2), None).unwrap();
    let all: Vec<usize> = (0..8).collect();
    let a = variation_matrix(&x, &all).unwrap();
    let b = variation_matrix(&xs, &all).unwrap();
    assert!(common::max_abs_diff(a.values(), b.values()) < 1e-9);

    let perm = [3, 0, 7, 1, 6, 2, 5, 4];
    let ap = variation_matrix(&x, &perm).unwrap();
    for r in 0..8 {
        for c in 0..8 {
            assert_eq!(ap.get(r, c), a.get(perm[r], perm[c]));
        }
    }
    for r in 0..8 {
        for c in 0..8 {
            assert_eq!(a.get(r, c), a.get(c, r));
            assert!(a.get(r, c) >= 0.0);
        }
    }
}

#[test]
fn variation_matches_direct_definition() {
    let raw = common::random_raw(25, 4, 3);
    let x = CompositionMatrix::from_raw_rows(&raw, None).unwrap();
    let a = variation_matrix(&x, &[0, 1, 2, 3]).unwrap();
    for j in 0..4 {
        for k in 0..4 {
            let lr: Vec<f64> = x.rows().map(|r| (r[j] / r[k]).ln()).collect();
            let mean = lr.iter().sum::<f64>() / lr.len() as f64;
            let direct = lr.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / lr.len() as f64;
            assert!((a.get(j, k) - direct).abs() < 1e-12);
        }
    }
}
