use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use tracing::warn;

use super::logistic::{fit_logistic_with, logistic_probability, LogisticOptions};
use super::roc::{roc_curve, RocCurve};
use super::{DesignMatrix, RiskError};

pub const DEFAULT_FOLDS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CvOptions {
    pub k: usize,
    pub seed: u64,
    /// Predicted probability at or above which a row is called a death.
    pub threshold: f64,
    /// Ridge penalty for the refit when a fold's plain fit fails.
    pub fallback_ridge: f64,
}

impl Default for CvOptions {
    fn default() -> Self {
        Self {
            k: DEFAULT_FOLDS,
            seed: 0,
            threshold: 0.5,
            fallback_ridge: 1e-2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CvSummary {
    pub k: usize,
    pub seed: u64,
    pub fold_sizes: Vec<usize>,
    pub fold_accuracy: Vec<f64>,
    pub mean_accuracy: f64,
    /// Sample standard deviation (n − 1) of the fold accuracies.
    pub sd_accuracy: f64,
    /// Folds whose model needed the ridge refit.
    pub fallback_folds: Vec<usize>,
    /// Held-out predicted probability of every row, in row order.
    pub held_out_scores: Vec<f64>,
    pub roc: RocCurve,
    pub auroc: f64,
}

/// Fold number of every row. Each class is shuffled with the seeded RNG,
/// the classes are laid end to end and position i goes to fold i mod k, so
/// fold sizes and per-fold class counts differ by at most one.
pub fn stratified_folds(y: &[u8], k: usize, seed: u64) -> Result<Vec<usize>, RiskError> {
    if k < 2 {
        return Err(RiskError::TooFewFolds);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut laid_out = Vec::with_capacity(y.len());
    for class in [0u8, 1] {
        let mut members: Vec<usize> = (0..y.len()).filter(|&i| y[i] == class).collect();
        if members.len() < k {
            return Err(RiskError::ClassTooSmall {
                class,
                count: members.len(),
                k,
            });
        }
        members.shuffle(&mut rng);
        laid_out.extend(members);
    }
    let mut folds = vec![0; y.len()];
    for (pos, &row) in laid_out.iter().enumerate() {
        folds[row] = pos % k;
    }
    Ok(folds)
}

/// Stratified k-fold cross-validation of the logistic model: accuracy per
/// held-out fold and a ROC curve over the pooled held-out predictions.
pub fn kfold_cross_validate(
    design: &DesignMatrix,
    opts: &CvOptions,
) -> Result<CvSummary, RiskError> {
    if design.y.iter().any(|&v| v > 1) {
        return Err(RiskError::NonBinaryOutcome);
    }
    let folds = stratified_folds(&design.y, opts.k, opts.seed)?;
    let mut scores = vec![0.0; design.n_rows()];
    let mut fold_sizes = Vec::with_capacity(opts.k);
    let mut fold_accuracy = Vec::with_capacity(opts.k);
    let mut fallback_folds = Vec::new();

    for fold in 0..opts.k {
        let (test, train): (Vec<usize>, Vec<usize>) =
            (0..design.n_rows()).partition(|&i| folds[i] == fold);
        let train_design = design.subset(&train);
        let coefficients = match fit_logistic_with(&train_design, &LogisticOptions::default()) {
            Ok(fit) => fit.coefficients,
            Err(err) => {
                warn!(fold, %err, "fold fit failed, refitting with ridge");
                fallback_folds.push(fold);
                let ridge = LogisticOptions {
                    ridge: opts.fallback_ridge,
                    ..Default::default()
                };
                fit_logistic_with(&train_design, &ridge)?.coefficients
            }
        };
        let mut correct = 0;
        for &i in &test {
            let p = logistic_probability(&coefficients, &design.rows[i]);
            scores[i] = p;
            correct += usize::from(u8::from(p >= opts.threshold) == design.y[i]);
        }
        fold_sizes.push(test.len());
        fold_accuracy.push(correct as f64 / test.len() as f64);
    }

    let k = opts.k as f64;
    let mean_accuracy = fold_accuracy.iter().sum::<f64>() / k;
    let sd_accuracy = (fold_accuracy
        .iter()
        .map(|a| (a - mean_accuracy).powi(2))
        .sum::<f64>()
        / (k - 1.0))
        .sqrt();
    let roc = roc_curve(&scores, &design.y)?;
    Ok(CvSummary {
        k: opts.k,
        seed: opts.seed,
        fold_sizes,
        fold_accuracy,
        mean_accuracy,
        sd_accuracy,
        fallback_folds,
        auroc: roc.auroc,
        held_out_scores: scores,
        roc,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn folds_partition_and_stratify() {
        let y: Vec<u8> = (0..100).map(|i| u8::from(i % 10 < 3)).collect();
        let folds = stratified_folds(&y, 5, 7).unwrap();
        for f in 0..5 {
            let members: Vec<usize> = (0..100).filter(|&i| folds[i] == f).collect();
            assert_eq!(members.len(), 20);
            assert_eq!(members.iter().filter(|&&i| y[i] == 1).count(), 6);
        }
        assert_eq!(folds, stratified_folds(&y, 5, 7).unwrap());
    }

    #[test]
    fn small_class_rejected() {
        let y = [0, 0, 0, 0, 0, 0, 1, 1];
        assert_eq!(
            stratified_folds(&y, 5, 0),
            Err(RiskError::ClassTooSmall {
                class: 1,
                count: 2,
                k: 5
            })
        );
    }
}
