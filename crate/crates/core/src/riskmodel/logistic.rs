use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::{DesignMatrix, RiskError};
use crate::stattest::special::erfc;
use crate::stattest::{DegreesOfFreedom, Sidedness, TestResult};

/// |β̂| above this marks a column as (quasi-)separated.
pub const SEPARATION_BETA: f64 = 15.0;
/// A standard error above this marks a column as (quasi-)separated.
pub const SEPARATION_SE: f64 = 100.0;

const MAX_HALVINGS: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogisticOptions {
    pub max_iter: usize,
    /// Stop when every score component is below this in absolute value.
    pub score_tol: f64,
    /// L2 penalty on the non-intercept coefficients. Zero disables it.
    pub ridge: f64,
}

impl Default for LogisticOptions {
    fn default() -> Self {
        Self {
            max_iter: 50,
            score_tol: 1e-8,
            ridge: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GlmFit {
    pub columns: Vec<String>,
    pub coefficients: Vec<f64>,
    pub standard_errors: Vec<f64>,
    pub z_values: Vec<f64>,
    pub p_values: Vec<f64>,
    pub log_likelihood: f64,
    /// Log-likelihood after each accepted Newton step, starting at β = 0.
    pub log_likelihood_trace: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    pub max_abs_score: f64,
    pub separation_flags: Vec<bool>,
    pub ridge: f64,
}

impl GlmFit {
    pub fn any_separation(&self) -> bool {
        self.separation_flags.iter().any(|&f| f)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// ln(1 + e^η) without overflow.
fn softplus(eta: f64) -> f64 {
    if eta > 0.0 {
        eta + (-eta).exp().ln_1p()
    } else {
        eta.exp().ln_1p()
    }
}

fn sigmoid(eta: f64) -> f64 {
    if eta >= 0.0 {
        1.0 / (1.0 + (-eta).exp())
    } else {
        let e = eta.exp();
        e / (1.0 + e)
    }
}

/// Bernoulli log-likelihood Σ yᵢηᵢ − ln(1 + e^ηᵢ).
pub fn log_likelihood(design: &DesignMatrix, beta: &[f64]) -> f64 {
    design
        .rows
        .iter()
        .zip(&design.y)
        .map(|(x, &y)| {
            let eta = dot(x, beta);
            f64::from(y) * eta - softplus(eta)
        })
        .sum()
}

/// Gradient of the log-likelihood: Σ (yᵢ − pᵢ) xᵢ.
pub fn score_vector(design: &DesignMatrix, beta: &[f64]) -> Vec<f64> {
    let mut s = vec![0.0; beta.len()];
    for (x, &y) in design.rows.iter().zip(&design.y) {
        let r = f64::from(y) - sigmoid(dot(x, beta));
        for (sj, xj) in s.iter_mut().zip(x) {
            *sj += r * xj;
        }
    }
    s
}

fn information(design: &DesignMatrix, beta: &[f64]) -> DMatrix<f64> {
    let k = beta.len();
    let mut h = DMatrix::zeros(k, k);
    for x in &design.rows {
        let p = sigmoid(dot(x, beta));
        let w = p * (1.0 - p);
        for i in 0..k {
            let wi = w * x[i];
            for j in i..k {
                h[(i, j)] += wi * x[j];
            }
        }
    }
    h.fill_lower_triangle_with_upper_triangle();
    h
}

fn penalty_applies(j: usize, columns: &[String]) -> bool {
    columns.get(j).is_none_or(|c| c != "intercept")
}

fn penalized_ll(design: &DesignMatrix, beta: &[f64], ridge: f64) -> f64 {
    let pen: f64 = beta
        .iter()
        .enumerate()
        .filter(|&(j, _)| penalty_applies(j, &design.columns))
        .map(|(_, b)| b * b)
        .sum();
    log_likelihood(design, beta) - 0.5 * ridge * pen
}

fn solve_spd(h: &DMatrix<f64>, rhs: &DVector<f64>) -> Option<DVector<f64>> {
    if let Some(ch) = h.clone().cholesky() {
        return Some(ch.solve(rhs));
    }
    h.clone().lu().solve(rhs)
}

fn invert_spd(h: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    if let Some(ch) = h.clone().cholesky() {
        return Some(ch.inverse());
    }
    h.clone().try_inverse()
}

pub fn fit_logistic(design: &DesignMatrix) -> Result<GlmFit, RiskError> {
    fit_logistic_with(design, &LogisticOptions::default())
}

/// Newton–Raphson maximum likelihood with step-halving. Standard errors
/// come from the inverse information matrix at the final estimate.
pub fn fit_logistic_with(
    design: &DesignMatrix,
    opts: &LogisticOptions,
) -> Result<GlmFit, RiskError> {
    let (n, k) = (design.n_rows(), design.n_cols());
    if n == 0 {
        return Err(RiskError::NoUsableRows);
    }
    if design.single_class() {
        return Err(RiskError::OneClass);
    }
    if n <= k {
        return Err(RiskError::TooFewRows { rows: n, cols: k });
    }
    let ridge = opts.ridge.max(0.0);
    let penalty_mask: Vec<f64> = (0..k)
        .map(|j| {
            if penalty_applies(j, &design.columns) {
                ridge
            } else {
                0.0
            }
        })
        .collect();

    let penalized_score = |beta: &[f64]| -> Vec<f64> {
        let mut s = score_vector(design, beta);
        for ((sj, bj), lam) in s.iter_mut().zip(beta).zip(&penalty_mask) {
            *sj -= lam * bj;
        }
        s
    };
    let penalized_info = |beta: &[f64]| -> DMatrix<f64> {
        let mut h = information(design, beta);
        for (j, lam) in penalty_mask.iter().enumerate() {
            h[(j, j)] += lam;
        }
        h
    };
    let max_abs = |v: &[f64]| v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));

    let mut beta = vec![0.0; k];
    let mut current = penalized_ll(design, &beta, ridge);
    let mut trace = vec![log_likelihood(design, &beta)];
    let mut iterations = 0;
    let mut converged = false;
    let mut score = penalized_score(&beta);

    while iterations < opts.max_iter {
        if max_abs(&score) < opts.score_tol {
            converged = true;
            break;
        }
        let h = penalized_info(&beta);
        let delta = solve_spd(&h, &DVector::from_column_slice(&score))
            .ok_or(RiskError::SingularInformation)?;
        if delta.iter().any(|d| !d.is_finite()) {
            return Err(RiskError::SingularInformation);
        }

        // changes below this are rounding noise in the summed likelihood
        let noise = 1e-12 * current.abs().max(1.0);
        let mut step = 1.0;
        let mut accepted = None;
        for _ in 0..MAX_HALVINGS {
            let cand: Vec<f64> = beta
                .iter()
                .zip(delta.iter())
                .map(|(b, d)| b + step * d)
                .collect();
            let value = penalized_ll(design, &cand, ridge);
            if value.is_finite() && value >= current - noise {
                accepted = Some((cand, value));
                break;
            }
            step *= 0.5;
        }
        let Some((next, value)) = accepted else {
            // no ascent possible at machine precision
            break;
        };
        beta = next;
        current = value;
        iterations += 1;
        trace.push(log_likelihood(design, &beta));
        score = penalized_score(&beta);
    }
    if !converged && max_abs(&score) < opts.score_tol {
        converged = true;
    }

    let cov = invert_spd(&penalized_info(&beta)).ok_or(RiskError::SingularInformation)?;
    let mut standard_errors = Vec::with_capacity(k);
    for j in 0..k {
        let v = cov[(j, j)];
        if !(v.is_finite() && v > 0.0) {
            return Err(RiskError::SingularInformation);
        }
        standard_errors.push(v.sqrt());
    }
    let z_values: Vec<f64> = beta
        .iter()
        .zip(&standard_errors)
        .map(|(b, se)| b / se)
        .collect();
    let p_values = z_values.iter().map(|z| two_sided_normal_p(*z)).collect();
    let separation_flags = beta
        .iter()
        .zip(&standard_errors)
        .map(|(b, se)| b.abs() > SEPARATION_BETA || *se > SEPARATION_SE)
        .collect();

    Ok(GlmFit {
        columns: design.columns.clone(),
        log_likelihood: log_likelihood(design, &beta),
        coefficients: beta,
        standard_errors,
        z_values,
        p_values,
        log_likelihood_trace: trace,
        iterations,
        converged,
        max_abs_score: max_abs(&score),
        separation_flags,
        ridge,
    })
}

/// 2(1 − Φ(|z|)), evaluated through erfc to keep small tails accurate.
fn two_sided_normal_p(z: f64) -> f64 {
    erfc(z.abs() / std::f64::consts::SQRT_2).min(1.0)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WaldTest {
    pub column: String,
    pub result: TestResult,
    /// False when the column is flagged for separation; the p-value is then
    /// not trustworthy.
    pub reliable: bool,
}

/// Wald test of a single coefficient against zero.
pub fn wald_test(fit: &GlmFit, j: usize) -> Result<WaldTest, RiskError> {
    let (&z, &p) = fit
        .z_values
        .get(j)
        .zip(fit.p_values.get(j))
        .ok_or(RiskError::ColumnOutOfRange(j))?;
    Ok(WaldTest {
        column: fit.columns[j].clone(),
        result: TestResult::new("wald", z, DegreesOfFreedom::None, p, Sidedness::TwoSided),
        reliable: !fit.separation_flags[j] && fit.converged,
    })
}

/// logistic(βᵀx).
pub fn logistic_probability(coefficients: &[f64], x: &[f64]) -> f64 {
    sigmoid(dot(coefficients, x))
}

pub fn predict_probability(fit: &GlmFit, x: &[f64]) -> Result<f64, RiskError> {
    if x.len() != fit.coefficients.len() {
        return Err(RiskError::DimensionMismatch {
            row: 0,
            expected: fit.coefficients.len(),
            got: x.len(),
        });
    }
    Ok(logistic_probability(&fit.coefficients, x))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn design(columns: &[&str], rows: Vec<Vec<f64>>, y: Vec<u8>) -> DesignMatrix {
        DesignMatrix::new(columns.iter().map(|c| c.to_string()).collect(), rows, y).unwrap()
    }

    #[test]
    fn intercept_only_balanced() {
        let d = design(&["intercept"], vec![vec![1.0], vec![1.0]], vec![0, 1]);
        let f = fit_logistic(&d).unwrap();
        assert_eq!(f.coefficients[0], 0.0);
        assert!(f.converged);
        assert_eq!(f.iterations, 0);
    }

    #[test]
    fn uninformative_predictor() {
        let rows = vec![
            vec![1.0, 0.0],
            vec![1.0, 0.0],
            vec![1.0, 1.0],
            vec![1.0, 1.0],
        ];
        let d = design(&["intercept", "x"], rows, vec![0, 1, 0, 1]);
        let f = fit_logistic(&d).unwrap();
        assert!(f.coefficients.iter().all(|b| b.abs() < 1e-12));
    }

    #[test]
    fn single_class_and_shape_errors() {
        let d = design(&["intercept"], vec![vec![1.0], vec![1.0]], vec![1, 1]);
        assert_eq!(fit_logistic(&d), Err(RiskError::OneClass));
        let d = design(
            &["intercept", "x"],
            vec![vec![1.0, 0.0], vec![1.0, 1.0]],
            vec![0, 1],
        );
        assert_eq!(
            fit_logistic(&d),
            Err(RiskError::TooFewRows { rows: 2, cols: 2 })
        );
    }

    #[test]
    fn sigmoid_limits() {
        assert_eq!(sigmoid(0.0), 0.5);
        assert!(sigmoid(800.0) == 1.0 && sigmoid(-800.0) == 0.0);
        assert!((softplus(800.0) - 800.0).abs() < 1e-12);
    }
}
