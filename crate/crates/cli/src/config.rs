use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use epitrack_core::ingest::{AggregationLevel, DEFAULT_BASE_URL, DEFAULT_UTC_OFFSET_HOURS};
use epitrack_core::transform::Metric;

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "epitrack",
    version,
    about = "Epidemic tracking reports: overview tables, trends and forecasts, symptom mining, risk models and demographics"
)]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

/// Knobs shared by every subcommand. All of them except the cache and
/// output locations are recorded in the provenance block of each report.
#[derive(Debug, Clone, Args, Serialize)]
pub struct RunConfig {
    /// Directory holding default input files.
    #[arg(long, global = true, default_value = "data")]
    pub data_dir: PathBuf,
    /// Snapshot cache directory.
    #[arg(
        long,
        global = true,
        env = "EPITRACK_CACHE_DIR",
        default_value = ".epitrack-cache"
    )]
    #[serde(skip)]
    pub cache_dir: PathBuf,
    /// Output directory for reports.
    #[arg(long, global = true, default_value = "out")]
    #[serde(skip)]
    pub out: PathBuf,
    /// Region to analyse (trend).
    #[arg(long, global = true, default_value = "USA")]
    pub region: String,
    #[arg(long, global = true, value_enum, default_value_t = MetricArg::Confirmed)]
    pub metric: MetricArg,
    /// Add log10 views.
    #[arg(long, global = true)]
    pub log_scale: bool,
    /// Normalize counts to cases per million inhabitants.
    #[arg(long, global = true)]
    pub per_capita: bool,
    /// Moving-average window in days.
    #[arg(long, global = true, default_value_t = 14)]
    pub window: usize,
    /// Forecast horizon in days.
    #[arg(long, global = true, default_value_t = 14)]
    pub horizon: usize,
    /// Cumulative count that marks day 0 when aligning regions.
    #[arg(long, global = true, default_value_t = 100.0)]
    pub threshold: f64,
    /// Cross-validation folds.
    #[arg(long, global = true, default_value_t = 5)]
    pub k: usize,
    /// Significance level for hypothesis tests.
    #[arg(long, global = true, default_value_t = 0.05)]
    pub alpha: f64,
    /// Symptom dictionary (TOML); the bundled one is used when absent.
    #[arg(long, global = true)]
    pub dictionary: Option<PathBuf>,
    /// Seed for every random choice (cross-validation folds).
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Fail on malformed input rows instead of skipping them.
    #[arg(long, global = true)]
    pub strict: bool,
    /// Increase log detail on stderr (-v, -vv).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    #[serde(skip)]
    pub verbose: u8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricArg {
    Confirmed,
    Deaths,
    Recovered,
}

impl From<MetricArg> for Metric {
    fn from(m: MetricArg) -> Self {
        match m {
            MetricArg::Confirmed => Metric::Confirmed,
            MetricArg::Deaths => Metric::Deaths,
            MetricArg::Recovered => Metric::Recovered,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LevelArg {
    Country,
    State,
}

impl From<LevelArg> for AggregationLevel {
    fn from(l: LevelArg) -> Self {
        match l {
            LevelArg::Country => AggregationLevel::Country,
            LevelArg::State => AggregationLevel::State,
        }
    }
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "snake_case")]
pub enum Command {
    /// Download a daily report into the cache, falling back to the newest cached one.
    Fetch {
        /// Report date as MM-DD-YYYY; defaults to today at --utc-offset.
        #[arg(long)]
        date: Option<String>,
        #[arg(long, default_value = DEFAULT_BASE_URL)]
        base_url: String,
        /// Hours east of UTC used to decide today's date.
        #[arg(long, default_value_t = DEFAULT_UTC_OFFSET_HOURS, allow_hyphen_values = true)]
        utc_offset: i32,
        #[arg(long, default_value_t = 30)]
        timeout_secs: u64,
    },
    /// Per-region table of confirmed, deaths and recovered counts.
    Overview {
        /// Daily-report CSV; defaults to the newest cached report.
        #[arg(long)]
        report: Option<PathBuf>,
        /// `region,population` CSV; defaults to <data-dir>/population.csv.
        #[arg(long)]
        population: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = LevelArg::Country)]
        level: LevelArg,
    },
    /// Daily increments, moving average, aligned series and an ARIMA forecast.
    Trend {
        /// Wide time-series CSV; defaults to <data-dir>/time_series_<metric>.csv.
        #[arg(long)]
        series: Option<PathBuf>,
        #[arg(long)]
        population: Option<PathBuf>,
    },
    /// Symptom prevalence scores and an n-gram candidate report.
    Symptoms {
        /// Patient line-list CSV; defaults to <data-dir>/patients.csv.
        #[arg(long)]
        linelist: Option<PathBuf>,
        /// Longest n-gram counted for the candidate report.
        #[arg(long, default_value_t = 3)]
        ngram_max: usize,
        /// Minimum count for an n-gram to be listed.
        #[arg(long, default_value_t = 5)]
        min_count: usize,
    },
    /// Logistic risk model with cross-validation and ROC curve.
    Risk {
        #[arg(long)]
        linelist: Option<PathBuf>,
    },
    /// Age and sex comparisons between patient outcome groups.
    Demog {
        #[arg(long)]
        linelist: Option<PathBuf>,
    },
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: &str| Err(CliError::usage(m.to_owned()));
        if self.window == 0 {
            return bad("--window must be positive");
        }
        if self.horizon == 0 {
            return bad("--horizon must be positive");
        }
        if !(self.threshold.is_finite() && self.threshold > 0.0) {
            return bad("--threshold must be positive");
        }
        if self.k < 2 {
            return bad("--k must be at least 2");
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return bad("--alpha must lie in (0, 1)");
        }
        Ok(())
    }

    pub fn data_file(&self, explicit: &Option<PathBuf>, default_name: &str) -> PathBuf {
        explicit
            .clone()
            .unwrap_or_else(|| self.data_dir.join(default_name))
    }
}
