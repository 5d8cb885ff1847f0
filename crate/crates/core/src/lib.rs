//! Analytics toolkit for epidemic surveillance data.
//!
//! - [`ingest`]: daily-report download, parsing, aggregation and a
//!   last-known-good cache.
//! - [`transform`]: log scale, per-capita, threshold alignment, moving
//!   averages and daily increments.
//! - [`forecast`]: ARIMA fitting, automatic order selection and interval
//!   forecasts.
//! - [`textmine`]: n-gram inventories, symptom dictionaries and indicator
//!   matrices.
//! - [`riskmodel`]: logistic regression with Wald tests, cross-validation
//!   and ROC analysis.
//! - [`stattest`]: F, Welch t and chi-square tests, QQ points and the
//!   distribution functions behind them.

pub mod forecast;
pub mod ingest;
pub mod riskmodel;
pub mod stattest;
pub mod textmine;
pub mod transform;
