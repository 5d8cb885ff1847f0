//! ARIMA(p, d, q) fitting by exact Gaussian maximum likelihood.
//!
//! The model on the d-times differenced series w_t is
//!
//! ```text
//! w_t = c + φ₁ w_{t−1} + … + φ_p w_{t−p} + θ₁ ε_{t−1} + … + θ_q ε_{t−q} + ε_t
//! ```
//!
//! The optimizer works on the process mean μ = c / (1 − Σφ) and on tanh
//! coordinates of the partial autocorrelations, so every iterate is
//! stationary and invertible. σ² is profiled out of the likelihood.

use serde::Serialize;

use super::difference::difference;
use super::optim::{minimize, BfgsOptions};
use super::params::{
    ar_from_unconstrained, ar_to_unconstrained, is_invertible, is_stationary, ma_from_unconstrained,
};
use super::statespace::{ArmaStateSpace, FilterOutput};
use super::ForecastError;

pub const MAX_P: usize = 5;
pub const MAX_D: usize = 2;
pub const MAX_Q: usize = 5;

/// Minimum excess of observations over ARMA parameters after differencing.
const IDENTIFIABILITY_MARGIN: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ArimaOrder {
    pub p: usize,
    pub d: usize,
    pub q: usize,
}

impl ArimaOrder {
    pub fn new(p: usize, d: usize, q: usize) -> Self {
        Self { p, d, q }
    }

    fn check_bounds(&self) -> Result<(), ForecastError> {
        if self.p > MAX_P || self.d > MAX_D || self.q > MAX_Q {
            return Err(ForecastError::OrderOutOfBounds(*self));
        }
        Ok(())
    }
}

impl std::fmt::Display for ArimaOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ARIMA({},{},{})", self.p, self.d, self.q)
    }
}

/// A fitted (or explicitly specified and evaluated) ARIMA model.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArimaModel {
    pub order: ArimaOrder,
    pub ar: Vec<f64>,
    pub ma: Vec<f64>,
    /// c in the differenced-scale equation; 0 when no intercept is fitted.
    pub intercept: f64,
    pub include_intercept: bool,
    pub innovation_variance: f64,
    pub log_likelihood: f64,
    pub aic: f64,
    /// Length of the differenced series the likelihood was evaluated on.
    pub n_obs: usize,
    pub iterations: usize,
}

impl ArimaModel {
    /// Process mean of the differenced series, μ = c / (1 − Σφ).
    pub fn mean(&self) -> f64 {
        self.intercept / (1.0 - self.ar.iter().sum::<f64>())
    }

    /// Number of free coefficients counted by the information criterion.
    pub fn n_params(&self) -> usize {
        self.order.p + self.order.q + usize::from(self.include_intercept)
    }

    /// Evaluates a fully specified model on `values`: no estimation, only
    /// the likelihood, σ² and AIC at the given coefficients.
    pub fn evaluate(
        values: &[f64],
        order: ArimaOrder,
        ar: &[f64],
        ma: &[f64],
        intercept: Option<f64>,
    ) -> Result<Self, ForecastError> {
        order.check_bounds()?;
        if ar.len() != order.p || ma.len() != order.q {
            return Err(ForecastError::CoefficientCount {
                order,
                ar: ar.len(),
                ma: ma.len(),
            });
        }
        if !is_stationary(ar) {
            return Err(ForecastError::NotStationary);
        }
        if !is_invertible(ma) {
            return Err(ForecastError::NotInvertible);
        }
        let w = difference(values, order.d)?;
        let ar_sum: f64 = ar.iter().sum();
        let mu = intercept.map_or(0.0, |c| c / (1.0 - ar_sum));
        let out = filter_demeaned(&w, ar, ma, mu).ok_or(ForecastError::LikelihoodFailure)?;
        Ok(Self::assemble(
            order,
            ar.to_vec(),
            ma.to_vec(),
            mu,
            intercept.is_some(),
            &out,
            0,
        ))
    }

    fn assemble(
        order: ArimaOrder,
        ar: Vec<f64>,
        ma: Vec<f64>,
        mu: f64,
        include_intercept: bool,
        out: &FilterOutput,
        iterations: usize,
    ) -> Self {
        let log_likelihood = out.log_likelihood();
        let intercept = if include_intercept {
            mu * (1.0 - ar.iter().sum::<f64>())
        } else {
            0.0
        };
        Self {
            order,
            ar,
            ma,
            intercept,
            include_intercept,
            innovation_variance: out.sigma2(),
            log_likelihood,
            aic: compute_aic(log_likelihood, order, include_intercept),
            n_obs: out.n,
            iterations,
        }
    }
}

/// AIC = −2 ln L + 2 (p + q + k), k = 1 when an intercept is estimated.
pub fn compute_aic(log_likelihood: f64, order: ArimaOrder, intercept_included: bool) -> f64 {
    let k = usize::from(intercept_included);
    -2.0 * log_likelihood + 2.0 * (order.p + order.q + k) as f64
}

pub(crate) fn filter_demeaned(w: &[f64], ar: &[f64], ma: &[f64], mu: f64) -> Option<FilterOutput> {
    let centred: Vec<f64> = w.iter().map(|v| v - mu).collect();
    ArmaStateSpace::new(ar, ma).filter(&centred)
}

fn mean_and_sd(w: &[f64]) -> (f64, f64) {
    let n = w.len() as f64;
    let mean = w.iter().sum::<f64>() / n;
    let var = w.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Sample partial autocorrelations up to `lag`, via Durbin–Levinson on the
/// sample autocorrelations.
fn sample_pacf(w: &[f64], lag: usize) -> Vec<f64> {
    let (mean, sd) = mean_and_sd(w);
    let n = w.len();
    let c0 = sd * sd;
    let acf: Vec<f64> = (0..=lag)
        .map(|k| {
            (k..n)
                .map(|t| (w[t] - mean) * (w[t - k] - mean))
                .sum::<f64>()
                / n as f64
                / c0
        })
        .collect();
    let mut phi: Vec<f64> = Vec::new();
    let mut pacf = Vec::with_capacity(lag);
    for k in 1..=lag {
        let num = acf[k]
            - phi
                .iter()
                .enumerate()
                .map(|(j, p)| p * acf[k - 1 - j])
                .sum::<f64>();
        let den = 1.0
            - phi
                .iter()
                .enumerate()
                .map(|(j, p)| p * acf[j + 1])
                .sum::<f64>();
        let r = if den.abs() > 1e-12 { num / den } else { 0.0 };
        let prev = phi.clone();
        for j in 0..phi.len() {
            phi[j] = prev[j] - r * prev[k - 2 - j];
        }
        phi.push(r);
        pacf.push(r);
    }
    pacf
}

/// Fits ARIMA(p, d, q) by maximizing the exact Gaussian likelihood of the
/// differenced series.
pub fn fit_arima(
    values: &[f64],
    order: ArimaOrder,
    include_intercept: bool,
) -> Result<ArimaModel, ForecastError> {
    order.check_bounds()?;
    let ArimaOrder { p, d, q } = order;
    let needed = p + q + IDENTIFIABILITY_MARGIN;
    if values.len() < d + needed {
        return Err(ForecastError::TooShort {
            needed: d + needed,
            got: values.len(),
        });
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(ForecastError::NonFinite);
    }
    let w = difference(values, d)?;
    let (w_mean, w_sd) = mean_and_sd(&w);
    if w_sd == 0.0 || w_sd / w_mean.abs().max(1.0) < 1e-12 {
        return Err(ForecastError::Degenerate);
    }

    let n = w.len() as f64;
    let unpack = |x: &[f64]| {
        let ar = ar_from_unconstrained(&x[..p]);
        let ma = ma_from_unconstrained(&x[p..p + q]);
        let mu = if include_intercept {
            w_mean + w_sd * x[p + q]
        } else {
            0.0
        };
        (ar, ma, mu)
    };
    let objective = |x: &[f64]| {
        let (ar, ma, mu) = unpack(x);
        match filter_demeaned(&w, &ar, &ma, mu) {
            Some(out) => -out.log_likelihood() / n,
            None => f64::INFINITY,
        }
    };

    let dim = p + q + usize::from(include_intercept);
    let mut starts = vec![vec![0.0; dim]];
    if p > 0 {
        let pacf: Vec<f64> = sample_pacf(&w, p)
            .into_iter()
            .map(|r| r.clamp(-0.9, 0.9))
            .collect();
        let phi = super::params::pacf_to_ar(&pacf);
        if let Some(u) = ar_to_unconstrained(&phi) {
            let mut s = vec![0.0; dim];
            s[..p].copy_from_slice(&u);
            starts.push(s);
        }
    }

    let best = starts
        .iter()
        .map(|x0| minimize(objective, x0, BfgsOptions::default()))
        .filter(|m| m.converged && m.value.is_finite())
        .min_by(|a, b| a.value.total_cmp(&b.value))
        .ok_or(ForecastError::NonConvergence(order))?;

    let (ar, ma, mu) = unpack(&best.x);
    let out = filter_demeaned(&w, &ar, &ma, mu).ok_or(ForecastError::LikelihoodFailure)?;
    Ok(ArimaModel::assemble(
        order,
        ar,
        ma,
        mu,
        include_intercept,
        &out,
        best.iterations,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn aic_arithmetic() {
        assert_eq!(compute_aic(-100.0, ArimaOrder::new(1, 0, 1), true), 206.0);
        assert_eq!(compute_aic(0.0, ArimaOrder::new(0, 0, 0), false), 0.0);
        let a = compute_aic(-42.5, ArimaOrder::new(2, 1, 1), false);
        let b = compute_aic(-42.5, ArimaOrder::new(2, 1, 2), false);
        assert_eq!(b - a, 2.0);
    }

    #[test]
    fn white_noise_mle_is_sample_moments() {
        let x = [2.1, 3.4, 1.9, 2.8, 3.0, 2.2, 2.6, 3.3, 1.7, 2.5, 2.9, 2.0];
        let m = fit_arima(&x, ArimaOrder::new(0, 0, 0), true).unwrap();
        let n = x.len() as f64;
        let mean = x.iter().sum::<f64>() / n;
        let var = x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
        assert!(
            (m.intercept - mean).abs() < 1e-6,
            "{} vs {mean}",
            m.intercept
        );
        assert!((m.innovation_variance - var).abs() < 1e-6);
        assert_eq!(m.aic, compute_aic(m.log_likelihood, m.order, true));
    }

    #[test]
    fn short_and_degenerate_series_rejected() {
        let x = [1.0, 2.0, 3.0, 4.0, 5.0];
        assert!(matches!(
            fit_arima(&x, ArimaOrder::new(1, 0, 1), true),
            Err(ForecastError::TooShort { .. })
        ));
        let flat = [3.0; 30];
        assert_eq!(
            fit_arima(&flat, ArimaOrder::new(0, 0, 0), true),
            Err(ForecastError::Degenerate)
        );
        let ramp: Vec<f64> = (0..30).map(f64::from).collect();
        assert_eq!(
            fit_arima(&ramp, ArimaOrder::new(1, 1, 0), false),
            Err(ForecastError::Degenerate)
        );
        assert!(matches!(
            fit_arima(&ramp, ArimaOrder::new(6, 0, 0), true),
            Err(ForecastError::OrderOutOfBounds(_))
        ));
    }

    #[test]
    fn evaluate_rejects_explosive_coefficients() {
        let x: Vec<f64> = (0..20).map(|i| (i as f64).sin()).collect();
        assert_eq!(
            ArimaModel::evaluate(&x, ArimaOrder::new(1, 0, 0), &[1.1], &[], None),
            Err(ForecastError::NotStationary)
        );
        assert_eq!(
            ArimaModel::evaluate(&x, ArimaOrder::new(0, 0, 1), &[], &[2.0], None),
            Err(ForecastError::NotInvertible)
        );
        assert!(matches!(
            ArimaModel::evaluate(&x, ArimaOrder::new(1, 0, 0), &[], &[], None),
            Err(ForecastError::CoefficientCount { .. })
        ));
    }
}
