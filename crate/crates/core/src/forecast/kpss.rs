//! KPSS test of level stationarity with a Bartlett-kernel long-run
//! variance, and the differencing-degree selection built on it.

use serde::Serialize;

use super::difference::difference;
use super::ForecastError;

/// 5% critical value of the level-stationarity KPSS statistic.
pub const KPSS_CRITICAL_5PCT: f64 = 0.463;
pub const KPSS_MIN_LEN: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KpssResult {
    pub statistic: f64,
    pub lag_truncation: usize,
    pub critical_value_5pct: f64,
    pub reject_stationarity: bool,
}

/// floor(4 · (n / 100)^{1/4})
pub fn kpss_lag_truncation(n: usize) -> usize {
    (4.0 * (n as f64 / 100.0).powf(0.25)).floor() as usize
}

/// Bartlett-weighted long-run variance of mean-zero residuals.
fn long_run_variance(resid: &[f64], lags: usize) -> f64 {
    let n = resid.len() as f64;
    let gamma = |s: usize| {
        resid[s..]
            .iter()
            .zip(resid)
            .map(|(a, b)| a * b)
            .sum::<f64>()
            / n
    };
    let mut lrv = gamma(0);
    for s in 1..=lags.min(resid.len() - 1) {
        let w = 1.0 - s as f64 / (lags as f64 + 1.0);
        lrv += 2.0 * w * gamma(s);
    }
    lrv
}

pub fn kpss_test(values: &[f64]) -> Result<KpssResult, ForecastError> {
    if values.len() < KPSS_MIN_LEN {
        return Err(ForecastError::TooShort {
            needed: KPSS_MIN_LEN,
            got: values.len(),
        });
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(ForecastError::NonFinite);
    }
    let n = values.len();
    let mean = values.iter().sum::<f64>() / n as f64;
    let resid: Vec<f64> = values.iter().map(|v| v - mean).collect();
    let lag_truncation = kpss_lag_truncation(n);

    let mut partial = 0.0;
    let mut eta = 0.0;
    for e in &resid {
        partial += e;
        eta += partial * partial;
    }
    eta /= (n * n) as f64;

    let lrv = long_run_variance(&resid, lag_truncation);
    let scale = mean.abs().max(1.0);
    // a constant series has no residual variation at all
    let statistic = if lrv <= (1e-14 * scale).powi(2) {
        0.0
    } else {
        eta / lrv
    };
    Ok(KpssResult {
        statistic,
        lag_truncation,
        critical_value_5pct: KPSS_CRITICAL_5PCT,
        reject_stationarity: statistic > KPSS_CRITICAL_5PCT,
    })
}

/// Smallest d ≤ `d_max` whose d-th difference passes the KPSS test;
/// `d_max` when every degree is rejected.
pub fn select_differencing(values: &[f64], d_max: usize) -> Result<usize, ForecastError> {
    let needed = KPSS_MIN_LEN + d_max;
    if values.len() < needed {
        return Err(ForecastError::TooShort {
            needed,
            got: values.len(),
        });
    }
    for d in 0..d_max {
        if !kpss_test(&difference(values, d)?)?.reject_stationarity {
            return Ok(d);
        }
    }
    Ok(d_max)
}
