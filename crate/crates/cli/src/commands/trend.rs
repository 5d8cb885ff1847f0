use std::path::Path;

use chrono::{Days, NaiveDate};
use serde::Serialize;

use epitrack_core::forecast::{
    auto_arima_with, forecast, ArimaModel, AutoArimaOptions, Candidate, ForecastResult,
};
use epitrack_core::ingest::{parse_population_table, parse_time_series_csv, RegionAliases};
use epitrack_core::transform::{
    align_to_threshold, daily_increments, per_capita, simple_moving_average, AlignedSeries, Metric,
    TimeSeries,
};

use crate::config::{Command, RunConfig};
use crate::error::CliError;
use crate::provenance::{Inputs, Reporter};
use crate::svg::{Chart, YScale};

#[derive(Serialize)]
struct Dated<'a> {
    start: NaiveDate,
    values: &'a [f64],
}

impl<'a> From<&'a TimeSeries> for Dated<'a> {
    fn from(s: &'a TimeSeries) -> Self {
        Self {
            start: s.start(),
            values: s.values(),
        }
    }
}

#[derive(Serialize)]
struct ForecastBlock<'a> {
    dates: Vec<NaiveDate>,
    #[serde(flatten)]
    result: &'a ForecastResult,
}

#[derive(Serialize)]
struct TrendReport<'a> {
    region: &'a str,
    metric: Metric,
    per_capita: bool,
    cumulative: Dated<'a>,
    increments: Dated<'a>,
    negative_increment_dates: &'a [NaiveDate],
    moving_average: Dated<'a>,
    aligned: &'a AlignedSeries,
    model: &'a ArimaModel,
    candidates: &'a [Candidate],
    forecast: ForecastBlock<'a>,
}

pub fn run(
    cfg: &RunConfig,
    cmd: &Command,
    series_path: &Path,
    population: &Path,
) -> Result<(), CliError> {
    let mut inputs = Inputs::default();
    let aliases = RegionAliases::builtin();
    let metric = Metric::from(cfg.metric);
    let all = parse_time_series_csv(&inputs.read(series_path)?, metric, &aliases)?;
    let region = aliases.canonical(&cfg.region);
    let Some(mut series) = all.into_iter().find(|s| s.region() == region) else {
        return Err(CliError::new(
            "input",
            format!("region `{region}` not found in {}", series_path.display()),
        ));
    };
    if cfg.per_capita {
        let table = parse_population_table(&inputs.read(population)?)?;
        let pop = table.get(region).copied();
        if pop.is_none() {
            return Err(CliError::new(
                "input",
                format!("no population for `{region}`"),
            ));
        }
        series = per_capita(&series, pop)?;
    }

    let inc = daily_increments(&series)?;
    let sma = simple_moving_average(&inc.series, cfg.window)?;
    let aligned = align_to_threshold(&series, cfg.threshold);
    let history = inc.series.values();
    let selection = auto_arima_with(history, &AutoArimaOptions::default())?;
    let fc = forecast(&selection.model, history, cfg.horizon)?;
    let dates: Vec<NaiveDate> = (1..=cfg.horizon as u64)
        .map(|h| inc.series.end() + Days::new(h))
        .collect();

    let reporter = Reporter::new(cfg, cmd, &inputs)?;
    reporter.json(
        "trend.json",
        &TrendReport {
            region,
            metric,
            per_capita: cfg.per_capita,
            cumulative: (&series).into(),
            increments: (&inc.series).into(),
            negative_increment_dates: &inc.negative_dates,
            moving_average: (&sma).into(),
            aligned: &aligned,
            model: &selection.model,
            candidates: &selection.candidates,
            forecast: ForecastBlock { dates, result: &fc },
        },
    )?;
    reporter.svg(
        "trend.svg",
        &chart(cfg, region, metric, &inc.series, &sma, &fc),
    )?;
    Ok(())
}

fn chart(
    cfg: &RunConfig,
    region: &str,
    metric: Metric,
    increments: &TimeSeries,
    sma: &TimeSeries,
    fc: &ForecastResult,
) -> String {
    let n = increments.len();
    let offset = (sma.start() - increments.start()).num_days() as f64;
    let bars: Vec<(f64, f64)> = increments
        .values()
        .iter()
        .enumerate()
        .map(|(i, &v)| (i as f64, v))
        .collect();
    let avg: Vec<(f64, f64)> = sma
        .values()
        .iter()
        .enumerate()
        .map(|(i, &v)| (offset + i as f64, v))
        .collect();
    let ahead = |h: usize| (n + h) as f64;
    let band: Vec<(f64, f64, f64)> = (0..fc.horizon)
        .map(|h| (ahead(h), fc.lower95[h], fc.upper95[h]))
        .collect();
    let mut path: Vec<(f64, f64)> = avg.last().copied().into_iter().collect();
    path.extend((0..fc.horizon).map(|h| (ahead(h), fc.point[h])));

    let all_y = increments
        .values()
        .iter()
        .chain(&fc.lower95)
        .chain(&fc.upper95);
    let (lo, hi) = all_y.fold((0.0f64, 0.0f64), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    let scale = if cfg.log_scale {
        YScale::Log
    } else {
        YScale::Linear
    };
    let x_max = ahead(fc.horizon);
    let ticks = (0..=5)
        .map(|i| {
            let x = (x_max * i as f64 / 5.0).round();
            let d = increments.start() + Days::new(x as u64);
            (x, d.format("%Y-%m-%d").to_string())
        })
        .collect();
    let unit = if cfg.per_capita { " per million" } else { "" };
    let mut c = Chart::new(
        &format!("New {metric} cases{unit}, {region}"),
        "date",
        &format!("daily new {metric}"),
        (-1.0, x_max),
        (lo, hi),
        scale,
    )
    .with_x_ticks(ticks);
    c.bars(&bars, 1.0, "#f0a35e", "daily new");
    c.band(&band, "#f0a35e", "95% interval");
    c.line(
        &avg,
        "#000000",
        false,
        &format!("{}-day average", cfg.window),
    );
    c.line(&path, "#808080", true, &format!("{} forecast", fc.order));
    c.render()
}
