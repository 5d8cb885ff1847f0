//! Daily-report ingestion: URL templating, CSV parsing, region
//! aggregation, a filesystem snapshot cache and fetch-with-fallback.

mod cache;
mod date;
mod fetch;
mod report;
mod series;

use std::path::PathBuf;

use thiserror::Error;

pub use cache::SnapshotCache;
pub use date::{report_date_at, ReportDate, DEFAULT_UTC_OFFSET_HOURS};
pub use fetch::{
    build_daily_report_url, build_daily_report_url_with, fetch_with_fallback, FetchOutcome,
    Fetcher, HttpFetcher, Provenance, DEFAULT_BASE_URL,
};
pub use report::{
    aggregate_to_region, attach_population, parse_daily_report, parse_population_table,
    AggregationLevel, ParseMode, ParsedReport, RegionAliases, RegionSnapshot, SkippedRow,
};
pub use series::parse_time_series_csv;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("invalid date {year:04}-{month:02}-{day:02}")]
    InvalidDate { year: i32, month: u32, day: u32 },
    #[error("cannot read `{0}` as MM-DD-YYYY")]
    DateFormat(String),
    #[error("missing required column `{0}`")]
    MissingColumn(&'static str),
    #[error("row {row}: {message}")]
    Row { row: usize, message: String },
    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
    #[error("alias table is not valid TOML: {0}")]
    AliasFormat(String),
    #[error("time-series dates are not consecutive at column `{0}`")]
    DateGap(String),
    #[error("time-series has no date columns")]
    NoDates,
    #[error(transparent)]
    Series(#[from] crate::transform::TransformError),
    #[error("cache I/O on {path}: {source}")]
    CacheIo {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cache is locked by another writer ({0})")]
    CacheLocked(PathBuf),
    #[error("cache marker points at unreadable entry `{0}`")]
    CacheCorrupt(String),
    #[error("no data available: fetch failed ({fetch_error}) and the cache is empty")]
    NoDataAvailable { fetch_error: String },
}
