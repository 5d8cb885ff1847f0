use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use tracing::warn;

use super::IngestError;

const DEFAULT_ALIASES: &str = include_str!("../../data/regions.toml");

/// Counts for one region on one report date.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RegionSnapshot {
    /// Country or region name.
    pub region: String,
    /// Province or state, when the row is sub-national.
    pub province: Option<String>,
    pub confirmed: u64,
    pub deaths: u64,
    pub recovered: u64,
    pub population: Option<u64>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ParseMode {
    /// Skip malformed rows, logging and reporting each one.
    #[default]
    Lenient,
    /// Fail on the first malformed row.
    Strict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SkippedRow {
    /// 1-based data row (the header is not counted).
    pub row: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParsedReport {
    pub snapshots: Vec<RegionSnapshot>,
    pub skipped: Vec<SkippedRow>,
}

const COUNTRY: [&str; 3] = ["country_region", "country/region", "country"];
const PROVINCE: [&str; 4] = ["province_state", "province/state", "province", "state"];

fn find(headers: &csv::StringRecord, names: &[&str]) -> Option<usize> {
    headers.iter().position(|h| {
        let h = h.trim().trim_start_matches('\u{feff}').to_ascii_lowercase();
        names.contains(&h.as_str())
    })
}

/// Reads a non-negative whole count. An empty field counts as zero.
fn parse_count(raw: &str) -> Result<u64, String> {
    let raw = raw.trim();
    if raw.is_empty() {
        return Ok(0);
    }
    if let Ok(v) = raw.parse::<u64>() {
        return Ok(v);
    }
    match raw.parse::<f64>() {
        Ok(v) if v >= 0.0 && v.fract() == 0.0 && v < u64::MAX as f64 => Ok(v as u64),
        _ => Err(format!("`{raw}` is not a non-negative count")),
    }
}

/// Parses a CSSE-style daily report. Columns are found by header name;
/// country, confirmed, deaths and recovered are required, province/state
/// and population are optional.
pub fn parse_daily_report(text: &str, mode: ParseMode) -> Result<ParsedReport, IngestError> {
    let mut reader = csv::ReaderBuilder::new()
        .flexible(true)
        .from_reader(text.as_bytes());
    let headers = reader.headers()?.clone();
    let country = find(&headers, &COUNTRY).ok_or(IngestError::MissingColumn("country"))?;
    let confirmed =
        find(&headers, &["confirmed"]).ok_or(IngestError::MissingColumn("confirmed"))?;
    let deaths = find(&headers, &["deaths"]).ok_or(IngestError::MissingColumn("deaths"))?;
    let recovered =
        find(&headers, &["recovered"]).ok_or(IngestError::MissingColumn("recovered"))?;
    let province = find(&headers, &PROVINCE);
    let population = find(&headers, &["population"]);

    let mut snapshots = Vec::new();
    let mut skipped = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 1;
        let parsed = record.map_err(|e| e.to_string()).and_then(|rec| {
            let field = |k: usize| rec.get(k).unwrap_or("").trim();
            let region = field(country);
            if region.is_empty() {
                return Err("empty country".to_owned());
            }
            let pop = match population.map(field).unwrap_or("") {
                "" => None,
                raw => match parse_count(raw)? {
                    0 => return Err("population must be positive".to_owned()),
                    p => Some(p),
                },
            };
            Ok(RegionSnapshot {
                region: region.to_owned(),
                province: province
                    .map(field)
                    .filter(|p| !p.is_empty())
                    .map(str::to_owned),
                confirmed: parse_count(field(confirmed))?,
                deaths: parse_count(field(deaths))?,
                recovered: parse_count(field(recovered))?,
                population: pop,
            })
        });
        match parsed {
            Ok(s) => snapshots.push(s),
            Err(reason) if mode == ParseMode::Lenient => {
                warn!(row, %reason, "skipping daily-report row");
                skipped.push(SkippedRow { row, reason });
            }
            Err(message) => return Err(IngestError::Row { row, message }),
        }
    }
    Ok(ParsedReport { snapshots, skipped })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AggregationLevel {
    Country,
    State,
}

/// Sums rows sharing a country (or country and state) and sorts by
/// confirmed count, largest first, then by name. Population is summed only
/// when every merged row has one.
pub fn aggregate_to_region(
    snapshots: &[RegionSnapshot],
    level: AggregationLevel,
) -> Vec<RegionSnapshot> {
    let mut groups: BTreeMap<(String, Option<String>), RegionSnapshot> = BTreeMap::new();
    for s in snapshots {
        let province = match level {
            AggregationLevel::Country => None,
            AggregationLevel::State => s.province.clone(),
        };
        let key = (s.region.clone(), province.clone());
        match groups.get_mut(&key) {
            Some(acc) => {
                acc.confirmed += s.confirmed;
                acc.deaths += s.deaths;
                acc.recovered += s.recovered;
                acc.population = acc.population.zip(s.population).map(|(a, b)| a + b);
            }
            None => {
                groups.insert(
                    key,
                    RegionSnapshot {
                        province,
                        ..s.clone()
                    },
                );
            }
        }
    }
    let mut out: Vec<RegionSnapshot> = groups.into_values().collect();
    out.sort_by(|a, b| {
        b.confirmed
            .cmp(&a.confirmed)
            .then_with(|| a.region.cmp(&b.region))
            .then_with(|| a.province.cmp(&b.province))
    });
    out
}

/// Exact-match region renames (for example "US" to "USA").
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RegionAliases {
    map: HashMap<String, String>,
}

#[derive(Deserialize)]
struct AliasFile {
    aliases: HashMap<String, String>,
}

impl RegionAliases {
    pub fn builtin() -> Self {
        Self::from_toml(DEFAULT_ALIASES).expect("bundled alias table is valid")
    }

    pub fn from_toml(text: &str) -> Result<Self, IngestError> {
        let file: AliasFile =
            toml::from_str(text).map_err(|e| IngestError::AliasFormat(e.to_string()))?;
        Ok(Self { map: file.aliases })
    }

    pub fn canonical<'a>(&'a self, name: &'a str) -> &'a str {
        self.map.get(name).map(String::as_str).unwrap_or(name)
    }

    pub fn apply(&self, snapshots: &mut [RegionSnapshot]) {
        for s in snapshots {
            if let Some(c) = self.map.get(&s.region) {
                s.region = c.clone();
            }
        }
    }
}

/// Two-column `region,population` table.
pub fn parse_population_table(text: &str) -> Result<BTreeMap<String, u64>, IngestError> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let headers = reader.headers()?.clone();
    let region = find(&headers, &["region"]).ok_or(IngestError::MissingColumn("region"))?;
    let population =
        find(&headers, &["population"]).ok_or(IngestError::MissingColumn("population"))?;
    let mut table = BTreeMap::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec?;
        let row = i + 1;
        let name = rec.get(region).unwrap_or("").trim();
        let value = parse_count(rec.get(population).unwrap_or(""))
            .map_err(|message| IngestError::Row { row, message })?;
        if name.is_empty() || value == 0 {
            return Err(IngestError::Row {
                row,
                message: "need a name and a positive population".into(),
            });
        }
        table.insert(name.to_owned(), value);
    }
    Ok(table)
}

/// Fills missing populations from a table keyed by state (for sub-national
/// rows) or by region.
pub fn attach_population(snapshots: &mut [RegionSnapshot], table: &BTreeMap<String, u64>) {
    for s in snapshots.iter_mut().filter(|s| s.population.is_none()) {
        let key = s.province.as_deref().unwrap_or(&s.region);
        s.population = table.get(key).copied();
    }
}
