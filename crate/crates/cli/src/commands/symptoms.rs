use std::path::Path;

use serde::Serialize;

use epitrack_core::textmine::{
    build_indicator_matrix, candidate_report, ngram_frequencies, prevalence, AbsentTextPolicy,
    PrevalenceRow,
};

use crate::config::{Command, RunConfig};
use crate::error::CliError;
use crate::provenance::{Inputs, Reporter};
use crate::svg::horizontal_bars;

#[derive(Serialize)]
struct SymptomsReport<'a> {
    records: usize,
    records_with_text: usize,
    degenerate: bool,
    prevalence: &'a [PrevalenceRow],
}

pub fn run(
    cfg: &RunConfig,
    cmd: &Command,
    linelist: &Path,
    ngram_max: usize,
    min_count: usize,
) -> Result<(), CliError> {
    let mut inputs = Inputs::default();
    let list = super::load_line_list(cfg, &mut inputs, &linelist.to_path_buf())?;
    let dict = super::load_dictionary(cfg, &mut inputs)?;

    let matrix = build_indicator_matrix(&list.records, &dict, AbsentTextPolicy::Exclude);
    let prev = prevalence(&matrix)?;
    let mut ranked = prev.rows.clone();
    ranked.sort_by(|a, b| {
        b.raw_count
            .cmp(&a.raw_count)
            .then_with(|| a.symptom.cmp(&b.symptom))
    });

    let texts: Vec<&str> = list
        .records
        .iter()
        .filter_map(|r| r.symptom_text.as_deref())
        .collect();
    let freqs = ngram_frequencies(&texts, ngram_max)?;
    let candidates = candidate_report(&freqs, &dict, min_count);

    let reporter = Reporter::new(cfg, cmd, &inputs)?;
    reporter.csv("symptoms.csv", &ranked)?;
    reporter.csv("ngram_candidates.csv", &candidates)?;
    reporter.json(
        "symptoms.json",
        &SymptomsReport {
            records: list.records.len(),
            records_with_text: matrix.n_rows(),
            degenerate: prev.degenerate,
            prevalence: &ranked,
        },
    )?;
    let bars: Vec<(String, f64)> = ranked
        .iter()
        .map(|r| (r.symptom.replace('_', " "), r.score_0_10))
        .collect();
    reporter.svg(
        "symptoms.svg",
        &horizontal_bars(
            "Relative symptom prevalence",
            "scaled prevalence (0 to 10)",
            &bars,
            10.0,
        ),
    )?;
    Ok(())
}
