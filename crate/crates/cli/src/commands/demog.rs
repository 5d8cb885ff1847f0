use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;

use epitrack_core::stattest::{
    chi_square_independence, f_test_variance, qq_points, welch_t_test, ContingencyTable, QqPoint,
    SampleSummary, TestResult,
};
use epitrack_core::textmine::{Outcome, Sex};

use crate::config::{Command, RunConfig};
use crate::error::CliError;
use crate::provenance::{Inputs, Reporter};

const AGE_BIN: f64 = 10.0;

#[derive(Serialize)]
struct SexByOutcome {
    rows: [&'static str; 2],
    columns: [&'static str; 2],
    counts: Vec<Vec<u64>>,
    expected: Vec<Vec<f64>>,
    chi_square: TestResult,
}

#[derive(Serialize)]
struct Groups<T> {
    active_or_recovered: T,
    died: T,
}

#[derive(Serialize)]
struct AgeByOutcome {
    summary: Groups<SampleSummary>,
    /// Variance ratio active/recovered over died.
    f_test: TestResult,
    /// Mean difference active/recovered minus died.
    welch_t: TestResult,
    qq: Groups<Vec<QqPoint>>,
}

#[derive(Serialize)]
struct Distribution {
    sex_counts: BTreeMap<&'static str, u64>,
    /// Lower bound of each 10-year bin and its count.
    age_bins: BTreeMap<u32, u64>,
}

#[derive(Serialize)]
struct DemogReport {
    records: usize,
    distribution: Distribution,
    sex_by_outcome: SexByOutcome,
    age_by_outcome: AgeByOutcome,
}

pub fn run(cfg: &RunConfig, cmd: &Command, linelist: &Path) -> Result<(), CliError> {
    let mut inputs = Inputs::default();
    let list = super::load_line_list(cfg, &mut inputs, &linelist.to_path_buf())?;
    let records = &list.records;

    let mut counts = vec![vec![0u64; 2]; 2];
    for r in records {
        if let (Some(sex), Some(outcome)) = (r.sex, r.outcome) {
            let i = usize::from(sex == Sex::Female);
            let j = usize::from(outcome == Outcome::Died);
            counts[i][j] += 1;
        }
    }
    let table = ContingencyTable::new(counts.clone())?;
    let chi_square = chi_square_independence(&table)?.with_alpha(cfg.alpha);

    let ages = |want: Outcome| -> Vec<f64> {
        records
            .iter()
            .filter(|r| r.outcome == Some(want))
            .filter_map(|r| r.age)
            .collect()
    };
    let (x, y) = (ages(Outcome::ActiveOrRecovered), ages(Outcome::Died));
    let age_by_outcome = AgeByOutcome {
        summary: Groups {
            active_or_recovered: SampleSummary::from_sample(&x)?,
            died: SampleSummary::from_sample(&y)?,
        },
        f_test: f_test_variance(&x, &y)?.with_alpha(cfg.alpha),
        welch_t: welch_t_test(&x, &y)?.with_alpha(cfg.alpha),
        qq: Groups {
            active_or_recovered: qq_points(&x)?,
            died: qq_points(&y)?,
        },
    };

    let mut sex_counts = BTreeMap::new();
    let mut age_bins = BTreeMap::new();
    for r in records {
        if let Some(sex) = r.sex {
            *sex_counts
                .entry(if sex == Sex::Female { "female" } else { "male" })
                .or_insert(0) += 1;
        }
        if let Some(age) = r.age {
            *age_bins
                .entry(((age / AGE_BIN).floor() * AGE_BIN) as u32)
                .or_insert(0) += 1;
        }
    }

    let report = DemogReport {
        records: records.len(),
        distribution: Distribution {
            sex_counts,
            age_bins,
        },
        sex_by_outcome: SexByOutcome {
            rows: ["male", "female"],
            columns: ["active_or_recovered", "died"],
            expected: table.expected(),
            counts,
            chi_square,
        },
        age_by_outcome,
    };
    Reporter::new(cfg, cmd, &inputs)?.json("demographics.json", &report)?;
    Ok(())
}
