mod common;

use rand::Rng;
use slr_core::rng::stream_rng;
use slr_core::screening::top_m_indices;
use slr_core::simgen::{simulate_dataset, SimConfig};
use slr_core::{
    fit_balance_glm, fit_slr, metrics, univariate_effects, BalancePartition, ClusterMethod,
    CompositionMatrix, Error, Family,
};

const METHODS: [ClusterMethod; 2] = [ClusterMethod::Spectral, ClusterMethod::Hierarchical];

#[test]
fn gaussian_glm_matches_normal_equations() {
    let mut rng = stream_rng(17, 0);
    for _ in 0..50 {
        let n = 5 + (rng.random::<f64>() * 40.0) as usize;
        let b: Vec<f64> = (0..n).map(|_| rng.random::<f64>() * 4.0 - 2.0).collect();
        let y: Vec<f64> = (0..n).map(|_| rng.random::<f64>() * 10.0).collect();
        // [n, sb; sb, sbb] [t0; t1] = [sy; sby]
        let nn = n as f64;
        let sb: f64 = b.iter().sum();
        let sbb: f64 = b.iter().map(|v| v * v).sum();
        let sy: f64 = y.iter().sum();
        let sby: f64 = b.iter().zip(&y).map(|(a, c)| a * c).sum();
        let det = nn * sbb - sb * sb;
        let t0 = (sbb * sy - sb * sby) / det;
        let t1 = (nn * sby - sb * sy) / det;
        let fit = fit_balance_glm(&b, &y, Family::Gaussian).unwrap();
        assert!((fit.theta0 - t0).abs() < 1e-10 * (1.0 + t0.abs()));
        assert!((fit.theta1 - t1).abs() < 1e-10 * (1.0 + t1.abs()));
    }
}

#[test]
fn glm_identity_on_centered_balance() {
    let b = [-1.5, -0.5, 0.5, 1.5];
    let fit = fit_balance_glm(&b, &b, Family::Gaussian).unwrap();
    assert!(fit.theta0.abs() < 1e-15);
    assert!((fit.theta1 - 1.0).abs() < 1e-15);
}

#[test]
fn noiseless_case_i_is_recovered_exactly() {
    for seed in 0..10 {
        let (x, y) = common::noiseless_case_i(100, seed);
        for method in METHODS {
            let fit = fit_slr(&x, &y, 6, Family::Gaussian, method).unwrap();
            let m = &fit.model;
            assert_eq!(
                m.partition,
                BalancePartition::new(vec![0, 1, 2], vec![3, 4, 5]).unwrap()
            );
            assert!((m.theta1 - 0.75).abs() < 1e-8, "theta1 = {}", m.theta1);
            let beta = m.to_beta(30);
            assert!(beta.iter().sum::<f64>().abs() < 1e-12);
            let pred = m.predict(&x).unwrap();
            assert!(metrics::mse(&y, &pred).unwrap() < 1e-18);
        }
    }
}

#[test]
fn noiseless_m2_keeps_two_active_variables() {
    for seed in 0..10 {
        let (x, y) = common::noiseless_case_i(100, seed);
        let effects = univariate_effects(&x, &y, Family::Gaussian).unwrap();
        let kept = top_m_indices(&effects, 2).unwrap();
        assert!(kept.iter().all(|&j| j < 6));
        match fit_slr(&x, &y, 2, Family::Gaussian, ClusterMethod::Spectral) {
            Ok(fit) => {
                // one active variable per side: the balance interpolates
                let part = &fit.model.partition;
                assert!(part.plus()[0] < 3 && part.minus()[0] >= 3);
                assert!((fit.model.theta1 - 0.75).abs() < 1e-8);
            }
            // two variables from the same side: their log-ratio is constant
            Err(e) => assert_eq!(e, Error::ConstantBalance),
        }
    }
}

#[test]
fn theta1_is_never_negative() {
    for seed in 0..20 {
        let cfg = if seed % 2 == 0 {
            SimConfig::case_i(Family::Gaussian, seed)
        } else {
            SimConfig::case_ii(Family::Binomial, seed)
        };
        let d = simulate_dataset(&cfg).unwrap();
        for m in [2, 4, 7, 12, 30] {
            for method in METHODS {
                if let Ok(fit) = fit_slr(&d.x, &d.y, m, cfg.family, method) {
                    assert!(fit.model.theta1 >= 0.0);
                    assert!(fit.model.partition.support_size() == m);
                }
            }
        }
    }
}

#[test]
fn permuted_variables_give_relabeled_model() {
    let d = simulate_dataset(&SimConfig::case_i(Family::Gaussian, 5)).unwrap();
    let p = 30;
    let perm: Vec<usize> = (0..p).map(|j| (j * 7 + 3) % p).collect();
    let xp = d.x.select_columns(&perm).unwrap();
    for method in METHODS {
        let a = fit_slr(&d.x, &d.y, 8, Family::Gaussian, method).unwrap().model;
        let b = fit_slr(&xp, &d.y, 8, Family::Gaussian, method).unwrap().model;
        let back = b.partition.remap(&perm).unwrap();
        assert_eq!(back, a.partition);
        assert!((a.theta1 - b.theta1).abs() < 1e-9);
        assert!((a.theta0 - b.theta0).abs() < 1e-9);
    }
}

#[test]
fn predictions_are_scale_invariant() {
    let d = simulate_dataset(&SimConfig::case_i(Family::Binomial, 8)).unwrap();
    let fit = fit_slr(&d.x, &d.y, 6, Family::Binomial, ClusterMethod::Spectral).unwrap();
    let raw = common::raw_rows(&d.x);
    let scaled = CompositionMatrix::from_raw_rows(&common::rescale_rows(&raw, 3), None).unwrap();
    let a = fit.model.predict(&d.x).unwrap();
    let b = fit.model.predict(&scaled).unwrap();
    assert!(common::max_abs_diff(&a, &b) < 1e-9);
    assert!(a.iter().all(|&v| (0.0..=1.0).contains(&v)));
}

#[test]
fn fit_rejects_bad_sizes() {
    let d = simulate_dataset(&SimConfig::case_i(Family::Gaussian, 1)).unwrap();
    assert!(matches!(
        fit_slr(&d.x, &d.y, 1, Family::Gaussian, ClusterMethod::Spectral),
        Err(Error::MTooSmall(1))
    ));
    assert!(matches!(
        fit_slr(&d.x, &d.y, 31, Family::Gaussian, ClusterMethod::Spectral),
        Err(Error::MTooLarge { .. })
    ));
    assert!(matches!(
        fit_slr(&d.x, &d.y[..50], 4, Family::Gaussian, ClusterMethod::Spectral),
        Err(Error::ResponseLength { .. })
    ));
}
