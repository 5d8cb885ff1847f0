use std::path::{Path, PathBuf};

use serde::Serialize;

use epitrack_core::ingest::{
    aggregate_to_region, attach_population, parse_daily_report, parse_population_table,
    AggregationLevel, ParseMode, RegionAliases, SkippedRow, SnapshotCache,
};
use epitrack_core::transform::per_million;

use crate::config::{Command, RunConfig};
use crate::error::CliError;
use crate::provenance::{Inputs, Reporter};

#[derive(Debug, Serialize)]
struct Row {
    rank: usize,
    region: String,
    province: Option<String>,
    confirmed: u64,
    deaths: u64,
    recovered: u64,
    population: Option<u64>,
    confirmed_per_million: Option<f64>,
    deaths_per_million: Option<f64>,
    recovered_per_million: Option<f64>,
    log10_confirmed: Option<f64>,
    log10_deaths: Option<f64>,
    log10_recovered: Option<f64>,
}

#[derive(Debug, Default, Serialize)]
struct Totals {
    confirmed: u64,
    deaths: u64,
    recovered: u64,
}

#[derive(Serialize)]
struct OverviewReport<'a> {
    level: AggregationLevel,
    totals: Totals,
    skipped_rows: &'a [SkippedRow],
    rows: &'a [Row],
}

fn log10_count(v: u64) -> Option<f64> {
    (v > 0).then(|| (v as f64).log10())
}

fn cell<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(ToString::to_string).unwrap_or_default()
}

pub fn run(
    cfg: &RunConfig,
    cmd: &Command,
    report: Option<&PathBuf>,
    population: &Path,
    level: AggregationLevel,
) -> Result<(), CliError> {
    let mut inputs = Inputs::default();
    let raw = match report {
        Some(path) => inputs.read(path)?,
        None => {
            let cache = SnapshotCache::open(&cfg.cache_dir)?;
            let (date, raw) = cache.latest()?.ok_or_else(|| {
                CliError::new(
                    "no_data_available",
                    "no --report given and the snapshot cache is empty",
                )
            })?;
            inputs.record(&date.filename(), &raw);
            raw
        }
    };
    let mode = if cfg.strict {
        ParseMode::Strict
    } else {
        ParseMode::Lenient
    };
    let parsed = parse_daily_report(&raw, mode)?;
    let mut snapshots = parsed.snapshots;
    RegionAliases::builtin().apply(&mut snapshots);
    let mut table = aggregate_to_region(&snapshots, level);

    if population.exists() || cfg.per_capita {
        let pop = parse_population_table(&inputs.read(population)?)?;
        attach_population(&mut table, &pop);
    }

    let per_m = |count: u64, population: Option<u64>| -> Result<Option<f64>, CliError> {
        match population {
            Some(p) if cfg.per_capita => Ok(Some(per_million(count as f64, p)?)),
            _ => Ok(None),
        }
    };
    let mut rows = Vec::with_capacity(table.len());
    let mut totals = Totals::default();
    for (i, s) in table.into_iter().enumerate() {
        totals.confirmed += s.confirmed;
        totals.deaths += s.deaths;
        totals.recovered += s.recovered;
        let log = |v: u64| if cfg.log_scale { log10_count(v) } else { None };
        rows.push(Row {
            rank: i + 1,
            confirmed_per_million: per_m(s.confirmed, s.population)?,
            deaths_per_million: per_m(s.deaths, s.population)?,
            recovered_per_million: per_m(s.recovered, s.population)?,
            log10_confirmed: log(s.confirmed),
            log10_deaths: log(s.deaths),
            log10_recovered: log(s.recovered),
            region: s.region,
            province: s.province,
            confirmed: s.confirmed,
            deaths: s.deaths,
            recovered: s.recovered,
            population: s.population,
        });
    }

    let reporter = Reporter::new(cfg, cmd, &inputs)?;
    let mut header = vec!["rank", "region"];
    if level == AggregationLevel::State {
        header.push("province");
    }
    header.extend(["confirmed", "deaths", "recovered", "population"]);
    if cfg.per_capita {
        header.extend([
            "confirmed_per_million",
            "deaths_per_million",
            "recovered_per_million",
        ]);
    }
    if cfg.log_scale {
        header.extend(["log10_confirmed", "log10_deaths", "log10_recovered"]);
    }
    let mut records: Vec<Vec<String>> = vec![header.iter().map(|h| h.to_string()).collect()];
    for r in &rows {
        let mut rec = vec![r.rank.to_string(), r.region.clone()];
        if level == AggregationLevel::State {
            rec.push(cell(&r.province));
        }
        rec.extend([
            r.confirmed.to_string(),
            r.deaths.to_string(),
            r.recovered.to_string(),
            cell(&r.population),
        ]);
        if cfg.per_capita {
            rec.extend([
                cell(&r.confirmed_per_million),
                cell(&r.deaths_per_million),
                cell(&r.recovered_per_million),
            ]);
        }
        if cfg.log_scale {
            rec.extend([
                cell(&r.log10_confirmed),
                cell(&r.log10_deaths),
                cell(&r.log10_recovered),
            ]);
        }
        records.push(rec);
    }
    reporter.csv("overview.csv", &records)?;
    reporter.json(
        "overview.json",
        &OverviewReport {
            level,
            totals,
            skipped_rows: &parsed.skipped,
            rows: &rows,
        },
    )?;
    Ok(())
}
