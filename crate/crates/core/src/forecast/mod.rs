//! ARIMA forecasting: differencing, KPSS-driven choice of d, exact
//! maximum-likelihood fitting, AIC-based automatic order search and
//! h-step forecasts with 95% intervals.

mod arima;
mod auto;
mod difference;
mod kpss;
mod optim;
pub mod params;
mod predict;
mod simulate;
mod statespace;

use thiserror::Error;

pub use arima::{compute_aic, fit_arima, ArimaModel, ArimaOrder, MAX_D, MAX_P, MAX_Q};
pub use auto::{
    auto_arima, auto_arima_with, AutoArimaOptions, AutoArimaReport, Candidate, SearchStrategy,
    AUTO_MIN_LEN, MIN_ROOT_MODULUS,
};
pub use difference::{difference, undifference};
pub use kpss::{
    kpss_lag_truncation, kpss_test, select_differencing, KpssResult, KPSS_CRITICAL_5PCT,
};
pub use optim::central_gradient;
pub use predict::{forecast, psi_weights, ForecastResult};
pub use simulate::simulate_arima;

/// Default forecast horizon in days.
pub const DEFAULT_HORIZON: usize = 14;

#[derive(Debug, Error, PartialEq)]
pub enum ForecastError {
    #[error("need at least {needed} observations, got {got}")]
    TooShort { needed: usize, got: usize },
    #[error("series contains non-finite values")]
    NonFinite,
    #[error("differenced series has zero variance")]
    Degenerate,
    #[error("{0} is outside the supported order bounds")]
    OrderOutOfBounds(ArimaOrder),
    #[error("{order} needs {} AR and {} MA coefficients, got {ar} and {ma}", order.p, order.q)]
    CoefficientCount {
        order: ArimaOrder,
        ar: usize,
        ma: usize,
    },
    #[error("AR polynomial is not stationary")]
    NotStationary,
    #[error("MA polynomial is not invertible")]
    NotInvertible,
    #[error("likelihood could not be evaluated")]
    LikelihoodFailure,
    #[error("optimizer did not converge for {0}")]
    NonConvergence(ArimaOrder),
    #[error("{0} has a root within the unit-circle margin")]
    NearUnitRoot(ArimaOrder),
    #[error("no candidate model converged")]
    NoCandidateConverged,
    #[error("forecast horizon must be at least 1")]
    ZeroHorizon,
}

/// Exact log-likelihood (σ² profiled) of an ARMA with the given mean on an
/// already differenced series. Exposed for optimality and gradient checks.
pub fn arma_log_likelihood(w: &[f64], ar: &[f64], ma: &[f64], mean: f64) -> Option<f64> {
    arima::filter_demeaned(w, ar, ma, mean).map(|o| o.log_likelihood())
}
