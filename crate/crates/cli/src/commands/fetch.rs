use std::time::Duration;

use serde::Serialize;

use epitrack_core::ingest::{
    fetch_with_fallback, HttpFetcher, ParseMode, Provenance, ReportDate, SnapshotCache,
};

use crate::config::{Command, RunConfig};
use crate::error::CliError;
use crate::provenance::{Inputs, Reporter};

#[derive(Serialize)]
struct FetchReport {
    requested_date: ReportDate,
    #[serde(flatten)]
    data: Provenance,
    rows: usize,
    total_confirmed: u64,
    fetch_error: Option<String>,
}

pub fn run(
    cfg: &RunConfig,
    cmd: &Command,
    date: Option<&str>,
    base_url: &str,
    utc_offset: i32,
    timeout_secs: u64,
) -> Result<(), CliError> {
    let requested = match date {
        Some(s) => s.parse::<ReportDate>()?,
        None => ReportDate::today(utc_offset),
    };
    let cache = SnapshotCache::open(&cfg.cache_dir)?;
    let fetcher = HttpFetcher::new(Duration::from_secs(timeout_secs));
    let mode = if cfg.strict {
        ParseMode::Strict
    } else {
        ParseMode::Lenient
    };
    let outcome = fetch_with_fallback(&fetcher, base_url, requested, &cache, mode)?;

    let served = match outcome.provenance {
        Provenance::Fresh { date } | Provenance::Cached { date } => date,
    };
    let mut inputs = Inputs::default();
    inputs.record(&served.filename(), &outcome.raw);
    let report = FetchReport {
        requested_date: requested,
        data: outcome.provenance,
        rows: outcome.snapshots.len(),
        total_confirmed: outcome.snapshots.iter().map(|s| s.confirmed).sum(),
        fetch_error: outcome.fetch_error,
    };
    Reporter::new(cfg, cmd, &inputs)?.json("fetch.json", &report)?;
    println!("{}", serde_json::to_string(&report)?);
    Ok(())
}
