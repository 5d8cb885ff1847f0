use std::collections::BTreeMap;

use chrono::NaiveDate;

use super::report::RegionAliases;
use super::IngestError;
use crate::transform::{Metric, TimeSeries};

/// CSSE uses M/D/YY headers; M/D/YYYY is accepted too.
fn parse_header_date(h: &str) -> Option<NaiveDate> {
    let mut it = h.trim().split('/');
    let (m, d, y) = (it.next()?, it.next()?, it.next()?);
    if it.next().is_some() {
        return None;
    }
    let (m, d, mut y): (u32, u32, i32) = (m.parse().ok()?, d.parse().ok()?, y.parse().ok()?);
    if y < 100 {
        y += 2000;
    }
    NaiveDate::from_ymd_opt(y, m, d)
}

/// Reads a wide CSSE time-series table (one row per region, one column per
/// day) and sums provinces into one cumulative series per country. Region
/// names go through `aliases`. Output is sorted by region.
pub fn parse_time_series_csv(
    text: &str,
    metric: Metric,
    aliases: &RegionAliases,
) -> Result<Vec<TimeSeries>, IngestError> {
    let mut reader = csv::ReaderBuilder::new()
        .flexible(true)
        .from_reader(text.as_bytes());
    let headers = reader.headers()?.clone();
    let country = headers
        .iter()
        .position(|h| {
            matches!(
                h.trim().to_ascii_lowercase().as_str(),
                "country/region" | "country_region" | "country"
            )
        })
        .ok_or(IngestError::MissingColumn("country"))?;

    let date_cols: Vec<(usize, NaiveDate)> = headers
        .iter()
        .enumerate()
        .filter_map(|(i, h)| parse_header_date(h).map(|d| (i, d)))
        .collect();
    let Some(&(_, start)) = date_cols.first() else {
        return Err(IngestError::NoDates);
    };
    for (k, &(i, d)) in date_cols.iter().enumerate() {
        if d != start + chrono::Days::new(k as u64) {
            return Err(IngestError::DateGap(headers[i].to_owned()));
        }
    }

    let mut totals: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    for (r, rec) in reader.records().enumerate() {
        let rec = rec?;
        let row = r + 1;
        let name = rec.get(country).unwrap_or("").trim();
        if name.is_empty() {
            return Err(IngestError::Row {
                row,
                message: "empty country".into(),
            });
        }
        let acc = totals
            .entry(aliases.canonical(name).to_owned())
            .or_insert_with(|| vec![0.0; date_cols.len()]);
        for (slot, &(i, _)) in acc.iter_mut().zip(&date_cols) {
            let raw = rec.get(i).unwrap_or("").trim();
            let v: f64 = if raw.is_empty() {
                0.0
            } else {
                raw.parse().map_err(|_| IngestError::Row {
                    row,
                    message: format!("`{raw}` is not a count"),
                })?
            };
            *slot += v;
        }
    }
    totals
        .into_iter()
        .map(|(region, values)| TimeSeries::new(region, metric, start, values).map_err(Into::into))
        .collect()
}
