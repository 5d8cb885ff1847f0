//! Logistic-regression risk model for patient outcomes: design matrix
//! construction, Newton–Raphson fitting with Wald tests, stratified k-fold
//! cross-validation and ROC analysis.

mod cv;
mod design;
mod logistic;
mod roc;

use thiserror::Error;

pub use cv::{kfold_cross_validate, stratified_folds, CvOptions, CvSummary, DEFAULT_FOLDS};
pub use design::{build_design_matrix, DesignMatrix, ExclusionReport};
pub use logistic::{
    fit_logistic, fit_logistic_with, log_likelihood, logistic_probability, predict_probability,
    score_vector, wald_test, GlmFit, LogisticOptions, WaldTest, SEPARATION_BETA, SEPARATION_SE,
};
pub use roc::{auroc, roc_curve, trapezoid_area, RocCurve, RocPoint};

#[derive(Debug, Error, PartialEq)]
pub enum RiskError {
    #[error("no usable rows")]
    NoUsableRows,
    #[error("outcome has a single class")]
    OneClass,
    #[error("need more rows than columns ({rows} rows, {cols} columns)")]
    TooFewRows { rows: usize, cols: usize },
    #[error("row {row} has {got} entries, expected {expected}")]
    DimensionMismatch {
        row: usize,
        expected: usize,
        got: usize,
    },
    #[error("{rows} rows but {outcomes} outcomes")]
    OutcomeLength { rows: usize, outcomes: usize },
    #[error("outcome values must be 0 or 1")]
    NonBinaryOutcome,
    #[error("design matrix contains non-finite values")]
    NonFinite,
    #[error("information matrix is singular")]
    SingularInformation,
    #[error("column index {0} is out of range")]
    ColumnOutOfRange(usize),
    #[error("class {class} has {count} rows, fewer than the {k} folds")]
    ClassTooSmall { class: u8, count: usize, k: usize },
    #[error("need at least 2 folds")]
    TooFewFolds,
    #[error("scores and labels differ in length ({scores} vs {labels})")]
    LengthMismatch { scores: usize, labels: usize },
}
