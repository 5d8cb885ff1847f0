//! Deterministic series transforms: log scale, per-capita normalization,
//! threshold alignment, simple moving average and daily increments.

use std::fmt;
use std::str::FromStr;

use chrono::{Days, NaiveDate};
use serde::{Deserialize, Serialize};
use thiserror::Error;
use tracing::warn;

pub const DEFAULT_SMA_WINDOW: usize = 14;
pub const DEFAULT_ALIGN_THRESHOLD: f64 = 100.0;

#[derive(Debug, Error, PartialEq)]
pub enum TransformError {
    #[error("series is empty")]
    EmptySeries,
    #[error("non-finite value at index {0}")]
    NonFinite(usize),
    #[error("log10 undefined for non-positive value {value} at index {index}")]
    LogDomain { index: usize, value: f64 },
    #[error("population must be positive and known")]
    InvalidPopulation,
    #[error("window must be at least 1")]
    ZeroWindow,
    #[error("window {window} exceeds series length {len}")]
    WindowTooLong { window: usize, len: usize },
    #[error("need at least {needed} values, got {got}")]
    TooShort { needed: usize, got: usize },
    #[error("unknown metric {0:?}")]
    UnknownMetric(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Confirmed,
    Deaths,
    Recovered,
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Metric::Confirmed => "confirmed",
            Metric::Deaths => "deaths",
            Metric::Recovered => "recovered",
        })
    }
}

impl FromStr for Metric {
    type Err = TransformError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "confirmed" => Ok(Metric::Confirmed),
            "deaths" => Ok(Metric::Deaths),
            "recovered" => Ok(Metric::Recovered),
            _ => Err(TransformError::UnknownMetric(s.to_string())),
        }
    }
}

/// Daily values for one (region, metric) pair.
///
/// Dates are implied by `start` plus the index, so they are strictly
/// increasing and one day apart by construction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimeSeries {
    region: String,
    metric: Metric,
    start: NaiveDate,
    values: Vec<f64>,
}

impl TimeSeries {
    pub fn new(
        region: impl Into<String>,
        metric: Metric,
        start: NaiveDate,
        values: Vec<f64>,
    ) -> Result<Self, TransformError> {
        if values.is_empty() {
            return Err(TransformError::EmptySeries);
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(TransformError::NonFinite(i));
        }
        Ok(Self {
            region: region.into(),
            metric,
            start,
            values,
        })
    }

    pub fn region(&self) -> &str {
        &self.region
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    pub fn start(&self) -> NaiveDate {
        self.start
    }

    pub fn end(&self) -> NaiveDate {
        self.date_at(self.values.len() - 1)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn date_at(&self, index: usize) -> NaiveDate {
        self.start + Days::new(index as u64)
    }

    pub fn dates(&self) -> impl Iterator<Item = NaiveDate> + '_ {
        (0..self.values.len()).map(|i| self.date_at(i))
    }

    /// `(date, value)` pairs.
    pub fn points(&self) -> impl Iterator<Item = (NaiveDate, f64)> + '_ {
        self.dates().zip(self.values.iter().copied())
    }

    fn with_values(&self, start: NaiveDate, values: Vec<f64>) -> Self {
        Self {
            region: self.region.clone(),
            metric: self.metric,
            start,
            values,
        }
    }

    /// Serializes as a `date,value` CSV with ISO dates.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("date,value\n");
        for (d, v) in self.points() {
            out.push_str(&format!("{},{}\n", d.format("%Y-%m-%d"), v));
        }
        out
    }
}

/// How `log10_transform` treats values that are not strictly positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZeroPolicy {
    /// Any value ≤ 0 is a domain error.
    #[default]
    Strict,
    /// log10(x + 1), for plotting series that start at zero.
    PlusOne,
}

pub fn log10_transform(
    series: &TimeSeries,
    policy: ZeroPolicy,
) -> Result<TimeSeries, TransformError> {
    let values = series
        .values
        .iter()
        .enumerate()
        .map(|(index, &value)| match policy {
            ZeroPolicy::Strict if value <= 0.0 => Err(TransformError::LogDomain { index, value }),
            ZeroPolicy::Strict => Ok(value.log10()),
            ZeroPolicy::PlusOne if value + 1.0 <= 0.0 => {
                Err(TransformError::LogDomain { index, value })
            }
            ZeroPolicy::PlusOne => Ok((value + 1.0).log10()),
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(series.with_values(series.start, values))
}

/// Cases per million inhabitants for a single count.
pub fn per_million(count: f64, population: u64) -> Result<f64, TransformError> {
    if population == 0 {
        return Err(TransformError::InvalidPopulation);
    }
    Ok(count / population as f64 * 1_000_000.0)
}

pub fn per_capita(
    series: &TimeSeries,
    population: Option<u64>,
) -> Result<TimeSeries, TransformError> {
    let population = population
        .filter(|&p| p > 0)
        .ok_or(TransformError::InvalidPopulation)?;
    let values = series
        .values
        .iter()
        .map(|&x| per_million(x, population))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(series.with_values(series.start, values))
}

/// A series re-indexed by days since its first threshold crossing.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlignedSeries {
    pub region: String,
    /// Calendar date of day 0, absent when the threshold is never reached.
    pub origin: Option<NaiveDate>,
    pub values: Vec<f64>,
}

impl AlignedSeries {
    pub fn day_index(&self) -> std::ops::Range<usize> {
        0..self.values.len()
    }
}

pub fn align_to_threshold(series: &TimeSeries, threshold: f64) -> AlignedSeries {
    match series.values.iter().position(|&v| v >= threshold) {
        Some(first) => AlignedSeries {
            region: series.region.clone(),
            origin: Some(series.date_at(first)),
            values: series.values[first..].to_vec(),
        },
        None => AlignedSeries {
            region: series.region.clone(),
            origin: None,
            values: Vec::new(),
        },
    }
}

/// Trailing simple moving average; value m is the mean of the window
/// ending at m, so the output is dated from the window's first full day.
pub fn simple_moving_average(
    series: &TimeSeries,
    window: usize,
) -> Result<TimeSeries, TransformError> {
    if window == 0 {
        return Err(TransformError::ZeroWindow);
    }
    if window > series.len() {
        return Err(TransformError::WindowTooLong {
            window,
            len: series.len(),
        });
    }
    let n = window as f64;
    let values = series
        .values
        .windows(window)
        .map(|w| w.iter().sum::<f64>() / n)
        .collect();
    Ok(series.with_values(series.date_at(window - 1), values))
}

/// First differences of a cumulative series.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Increments {
    pub series: TimeSeries,
    /// Dates whose increment was negative (reporting corrections).
    pub negative_dates: Vec<NaiveDate>,
}

pub fn daily_increments(cumulative: &TimeSeries) -> Result<Increments, TransformError> {
    if cumulative.len() < 2 {
        return Err(TransformError::TooShort {
            needed: 2,
            got: cumulative.len(),
        });
    }
    let values: Vec<f64> = cumulative.values.windows(2).map(|w| w[1] - w[0]).collect();
    let series = cumulative.with_values(cumulative.date_at(1), values);
    let negative_dates: Vec<NaiveDate> = series
        .points()
        .filter(|&(_, v)| v < 0.0)
        .map(|(d, _)| d)
        .collect();
    if !negative_dates.is_empty() {
        warn!(
            region = %series.region,
            count = negative_dates.len(),
            "negative daily increments kept as reported"
        );
    }
    Ok(Increments {
        series,
        negative_dates,
    })
}
