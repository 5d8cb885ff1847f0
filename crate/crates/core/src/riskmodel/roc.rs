use serde::Serialize;

use super::RiskError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RocPoint {
    pub fpr: f64,
    pub tpr: f64,
    /// Scores at or above this are called positive. `None` for the
    /// all-negative starting point.
    pub threshold: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RocCurve {
    pub points: Vec<RocPoint>,
    pub auroc: f64,
}

fn check(scores: &[f64], labels: &[u8]) -> Result<(usize, usize), RiskError> {
    if scores.len() != labels.len() {
        return Err(RiskError::LengthMismatch {
            scores: scores.len(),
            labels: labels.len(),
        });
    }
    if scores.iter().any(|s| !s.is_finite()) {
        return Err(RiskError::NonFinite);
    }
    if labels.iter().any(|&l| l > 1) {
        return Err(RiskError::NonBinaryOutcome);
    }
    let pos = labels.iter().filter(|&&l| l == 1).count();
    let neg = labels.len() - pos;
    if pos == 0 || neg == 0 {
        return Err(RiskError::OneClass);
    }
    Ok((pos, neg))
}

/// Sweeps the threshold down through every distinct score. Tied scores
/// move together, giving a diagonal segment.
pub fn roc_curve(scores: &[f64], labels: &[u8]) -> Result<RocCurve, RiskError> {
    let (pos, neg) = check(scores, labels)?;
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));

    let mut points = vec![RocPoint {
        fpr: 0.0,
        tpr: 0.0,
        threshold: None,
    }];
    let (mut tp, mut fp) = (0usize, 0usize);
    let mut i = 0;
    while i < order.len() {
        let s = scores[order[i]];
        while i < order.len() && scores[order[i]] == s {
            if labels[order[i]] == 1 {
                tp += 1;
            } else {
                fp += 1;
            }
            i += 1;
        }
        points.push(RocPoint {
            fpr: fp as f64 / neg as f64,
            tpr: tp as f64 / pos as f64,
            threshold: Some(s),
        });
    }
    Ok(RocCurve {
        auroc: auroc(scores, labels)?,
        points,
    })
}

/// Probability that a random positive outscores a random negative, ties
/// counting one half, via the rank-sum statistic.
pub fn auroc(scores: &[f64], labels: &[u8]) -> Result<f64, RiskError> {
    let (pos, neg) = check(scores, labels)?;
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    // doubled ranks keep tie averages integral
    let mut rank_sum_x2: u64 = 0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j < order.len() && scores[order[j]] == scores[order[i]] {
            j += 1;
        }
        // ranks i+1..=j averaged: (i + 1 + j) / 2
        let avg_x2 = (i + 1 + j) as u64;
        let positives = order[i..j].iter().filter(|&&k| labels[k] == 1).count() as u64;
        rank_sum_x2 += avg_x2 * positives;
        i = j;
    }
    let (p, n) = (pos as u64, neg as u64);
    // U = R − p(p+1)/2, so 2U = 2R − p(p+1)
    let u_x2 = rank_sum_x2 - p * (p + 1);
    Ok(u_x2 as f64 / (2 * p * n) as f64)
}

/// Area under a piecewise-linear curve by the trapezoid rule.
pub fn trapezoid_area(points: &[RocPoint]) -> f64 {
    points
        .windows(2)
        .map(|w| (w[1].fpr - w[0].fpr) * (w[1].tpr + w[0].tpr) / 2.0)
        .sum()
}
