//! Prediction and variable-selection measures.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Mean squared error `n^-1 sum (y - yhat)^2`.
pub fn mse(y: &[f64], yhat: &[f64]) -> Result<f64> {
    if y.len() != yhat.len() {
        return Err(Error::LengthMismatch(y.len(), yhat.len()));
    }
    if y.is_empty() {
        return Err(Error::Empty);
    }
    let ss: f64 = y.iter().zip(yhat).map(|(a, b)| (a - b) * (a - b)).sum();
    Ok(ss / y.len() as f64)
}

/// Area under the ROC curve as the Mann-Whitney statistic
/// `P(s+ > s-) + P(s+ = s-)/2`, from mid-ranks.
pub fn auc(scores: &[f64], labels: &[f64]) -> Result<f64> {
    if scores.len() != labels.len() {
        return Err(Error::LengthMismatch(scores.len(), labels.len()));
    }
    if let Some((index, &value)) = labels
        .iter()
        .enumerate()
        .find(|(_, &v)| v != 0.0 && v != 1.0)
    {
        return Err(Error::NotBinary { index, value });
    }
    if let Some(index) = scores.iter().position(|s| s.is_nan()) {
        return Err(Error::NonFinite(index));
    }
    let n = scores.len();
    let n_pos = labels.iter().filter(|&&l| l == 1.0).count();
    let n_neg = n - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::OneClassOnly);
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    let mut rank_sum_pos = 0.0;
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && scores[order[end]] == scores[order[start]] {
            end += 1;
        }
        // ranks start+1..=end share their average
        let mid_rank = (start + 1 + end) as f64 / 2.0;
        let pos_in_block = order[start..end]
            .iter()
            .filter(|&&i| labels[i] == 1.0)
            .count();
        rank_sum_pos += mid_rank * pos_in_block as f64;
        start = end;
    }
    let u = rank_sum_pos - (n_pos * (n_pos + 1)) as f64 / 2.0;
    Ok(u / (n_pos as f64 * n_neg as f64))
}

/// Support recovery of an estimated coefficient vector against the truth.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionReport {
    pub fpr: f64,
    pub tpr: f64,
    pub precision: f64,
    pub f1: f64,
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    pub tn: usize,
    /// Set when some rate had an empty denominator and was reported as 0.
    pub degenerate: bool,
}

/// Compares supports `{j : |beta_j| > tol}`; `tol = 0` is an exact-zero test.
pub fn selection_metrics(beta_hat: &[f64], beta_true: &[f64], tol: f64) -> Result<SelectionReport> {
    if beta_hat.len() != beta_true.len() {
        return Err(Error::LengthMismatch(beta_hat.len(), beta_true.len()));
    }
    let (mut tp, mut fp, mut fn_, mut tn) = (0, 0, 0, 0);
    for (&est, &truth) in beta_hat.iter().zip(beta_true) {
        match (est.abs() > tol, truth != 0.0) {
            (true, true) => tp += 1,
            (true, false) => fp += 1,
            (false, true) => fn_ += 1,
            (false, false) => tn += 1,
        }
    }
    let mut degenerate = false;
    let mut ratio = |num: usize, den: usize| {
        if den == 0 {
            degenerate = true;
            0.0
        } else {
            num as f64 / den as f64
        }
    };
    let fpr = ratio(fp, fp + tn);
    let tpr = ratio(tp, tp + fn_);
    let precision = ratio(tp, tp + fp);
    let f1 = if tp == 0 {
        0.0
    } else {
        2.0 * precision * tpr / (precision + tpr)
    };
    Ok(SelectionReport {
        fpr,
        tpr,
        precision,
        f1,
        tp,
        fp,
        fn_,
        tn,
        degenerate,
    })
}

/// Euclidean distance between two coefficient vectors.
pub fn l2_error(beta_hat: &[f64], beta_true: &[f64]) -> Result<f64> {
    if beta_hat.len() != beta_true.len() {
        return Err(Error::LengthMismatch(beta_hat.len(), beta_true.len()));
    }
    Ok(beta_hat
        .iter()
        .zip(beta_true)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mse_examples() {
        assert_eq!(mse(&[1.0, 2.0], &[1.0, 2.0]).unwrap(), 0.0);
        assert_eq!(mse(&[1.0, 2.0], &[0.0, 0.0]).unwrap(), 2.5);
        assert!(matches!(mse(&[1.0], &[]), Err(Error::LengthMismatch(1, 0))));
        assert!(matches!(mse(&[], &[]), Err(Error::Empty)));
    }

    #[test]
    fn auc_examples() {
        assert_eq!(auc(&[0.1, 0.2, 0.8, 0.9], &[0.0, 0.0, 1.0, 1.0]).unwrap(), 1.0);
        assert_eq!(
            auc(&[0.1, 0.4, 0.35, 0.8], &[0.0, 0.0, 1.0, 1.0]).unwrap(),
            0.75
        );
        assert_eq!(auc(&[0.5; 4], &[0.0, 1.0, 0.0, 1.0]).unwrap(), 0.5);
        assert!(matches!(
            auc(&[0.1, 0.2], &[1.0, 1.0]),
            Err(Error::OneClassOnly)
        ));
        assert!(matches!(
            auc(&[0.1, 0.2], &[1.0, 2.0]),
            Err(Error::NotBinary { .. })
        ));
    }

    #[test]
    fn selection_examples() {
        let truth = [1.0, -1.0, 0.0, 0.0];
        let r = selection_metrics(&truth, &truth, 0.0).unwrap();
        assert_eq!((r.fpr, r.tpr, r.f1), (0.0, 1.0, 1.0));

        let mut hat = [0.0; 10];
        hat[0] = 0.3;
        hat[1] = -0.1;
        hat[6] = 0.2;
        let mut truth = [0.0; 10];
        truth[..3].copy_from_slice(&[0.25, 0.25, -0.5]);
        let r = selection_metrics(&hat, &truth, 0.0).unwrap();
        assert_eq!((r.tp, r.fp, r.fn_, r.tn), (2, 1, 1, 6));
        assert!((r.fpr - 1.0 / 7.0).abs() < 1e-15);
        assert!((r.tpr - 2.0 / 3.0).abs() < 1e-15);
        assert!((r.precision - 2.0 / 3.0).abs() < 1e-15);
        assert!((r.f1 - 2.0 / 3.0).abs() < 1e-15);
        assert!(!r.degenerate);

        let r = selection_metrics(&[0.0; 10], &truth, 0.0).unwrap();
        assert_eq!((r.tpr, r.precision, r.f1), (0.0, 0.0, 0.0));
        assert!(r.degenerate);
    }

    #[test]
    fn selection_tolerance() {
        let r = selection_metrics(&[1e-9, 1.0], &[0.0, 1.0], 1e-6).unwrap();
        assert_eq!(r.fp, 0);
    }

    #[test]
    fn l2_examples() {
        assert_eq!(l2_error(&[1.0, 2.0], &[1.0, 2.0]).unwrap(), 0.0);
        let d = l2_error(&[0.1, -0.2], &[0.0, 0.0]).unwrap();
        assert!((d - 0.2236068).abs() < 5e-8);
    }
}
