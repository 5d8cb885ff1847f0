use std::time::Duration;

use serde::Serialize;
use tracing::{info, warn};

use super::report::{parse_daily_report, ParseMode, RegionSnapshot};
use super::{IngestError, ReportDate, SnapshotCache};

pub const DEFAULT_BASE_URL: &str =
    "https://raw.githubusercontent.com/CSSEGISandData/COVID-19/master/csse_covid_19_data/csse_covid_19_daily_reports/";

/// Daily-report URL under the default base.
pub fn build_daily_report_url(date: ReportDate) -> String {
    build_daily_report_url_with(DEFAULT_BASE_URL, date)
}

pub fn build_daily_report_url_with(base: &str, date: ReportDate) -> String {
    let sep = if base.ends_with('/') { "" } else { "/" };
    format!("{base}{sep}{}", date.filename())
}

/// Source of raw report text, abstracted so tests can run offline.
pub trait Fetcher {
    fn fetch(&self, url: &str) -> Result<String, String>;
}

/// Blocking HTTP(S) fetcher. Non-2xx responses are errors.
pub struct HttpFetcher {
    agent: ureq::Agent,
}

impl HttpFetcher {
    pub fn new(timeout: Duration) -> Self {
        let agent = ureq::Agent::config_builder()
            .timeout_global(Some(timeout))
            .build()
            .into();
        Self { agent }
    }
}

impl Default for HttpFetcher {
    fn default() -> Self {
        Self::new(Duration::from_secs(30))
    }
}

impl Fetcher for HttpFetcher {
    fn fetch(&self, url: &str) -> Result<String, String> {
        let mut resp = self.agent.get(url).call().map_err(|e| e.to_string())?;
        resp.body_mut().read_to_string().map_err(|e| e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum Provenance {
    Fresh { date: ReportDate },
    Cached { date: ReportDate },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FetchOutcome {
    pub provenance: Provenance,
    pub snapshots: Vec<RegionSnapshot>,
    /// Why the fresh fetch was not used, when falling back.
    pub fetch_error: Option<String>,
    /// Raw report text the snapshots came from.
    #[serde(skip)]
    pub raw: String,
}

/// Downloads and parses the report for `date`. On success the raw text is
/// committed to the cache and becomes the latest-good entry. On any fetch
/// or parse failure the latest-good entry is returned instead, tagged
/// `Cached`. With a cold cache the failure is an error.
pub fn fetch_with_fallback(
    fetcher: &dyn Fetcher,
    base_url: &str,
    date: ReportDate,
    cache: &SnapshotCache,
    mode: ParseMode,
) -> Result<FetchOutcome, IngestError> {
    let url = build_daily_report_url_with(base_url, date);
    let attempt = fetcher.fetch(&url).and_then(|raw| {
        parse_daily_report(&raw, mode)
            .map(|p| (raw, p))
            .map_err(|e| e.to_string())
    });
    let fetch_error = match attempt {
        Ok((raw, parsed)) => {
            cache.commit(date, &raw)?;
            info!(%url, rows = parsed.snapshots.len(), "fetched fresh report");
            return Ok(FetchOutcome {
                provenance: Provenance::Fresh { date },
                snapshots: parsed.snapshots,
                fetch_error: None,
                raw,
            });
        }
        Err(e) => e,
    };
    warn!(%url, error = %fetch_error, "fetch failed, falling back to cache");
    let Some((cached_date, raw)) = cache.latest()? else {
        return Err(IngestError::NoDataAvailable { fetch_error });
    };
    // the entry parsed when it was committed, so lenient parsing cannot fail here
    let parsed = parse_daily_report(&raw, ParseMode::Lenient)?;
    Ok(FetchOutcome {
        provenance: Provenance::Cached { date: cached_date },
        snapshots: parsed.snapshots,
        fetch_error: Some(fetch_error),
        raw,
    })
}
