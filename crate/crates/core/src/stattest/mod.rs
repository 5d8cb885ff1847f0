//! Classical hypothesis tests used by the demographics report: F-test for
//! equal variances, Welch's unpooled t-test, the chi-square test of
//! independence, and normal QQ points.

mod dist;
mod hypothesis;
mod qq;
pub mod special;

use serde::Serialize;
use thiserror::Error;

pub use dist::Distribution;
pub use hypothesis::{
    chi_square_independence, f_test_variance, welch_t_test, ContingencyTable, SampleSummary,
};
pub use qq::{qq_points, QqPoint};

pub const DEFAULT_ALPHA: f64 = 0.05;

#[derive(Debug, Error, PartialEq)]
pub enum StatError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("need at least {needed} observations, got {got}")]
    TooFewObservations { needed: usize, got: usize },
    #[error("sample variance is zero")]
    ZeroVariance,
    #[error("contingency table has a zero marginal")]
    ZeroMarginal,
    #[error("contingency table rows have unequal lengths")]
    RaggedTable,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(untagged)]
pub enum DegreesOfFreedom {
    Single(f64),
    Pair(f64, f64),
    /// Reference distribution is the standard normal; serialized as null.
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Sidedness {
    TwoSided,
    UpperTail,
}

/// Outcome of a single hypothesis test. `reject` is always `p_value < alpha`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TestResult {
    pub test: &'static str,
    pub statistic: f64,
    pub df: DegreesOfFreedom,
    pub p_value: f64,
    pub alpha: f64,
    pub reject: bool,
    pub sidedness: Sidedness,
}

impl TestResult {
    pub fn new(
        test: &'static str,
        statistic: f64,
        df: DegreesOfFreedom,
        p_value: f64,
        sidedness: Sidedness,
    ) -> Self {
        let p_value = p_value.clamp(0.0, 1.0);
        Self {
            test,
            statistic,
            df,
            p_value,
            alpha: DEFAULT_ALPHA,
            reject: p_value < DEFAULT_ALPHA,
            sidedness,
        }
    }

    /// Re-evaluates the decision at a different significance level.
    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self.reject = self.p_value < alpha;
        self
    }
}
