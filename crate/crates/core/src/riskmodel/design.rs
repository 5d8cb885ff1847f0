use serde::Serialize;

use super::RiskError;
use crate::textmine::{IndicatorMatrix, Outcome, PatientRecord, Sex};

/// Predictors and binary outcome (1 = died), one row per patient. The first
/// column is the all-ones intercept.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DesignMatrix {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub y: Vec<u8>,
    /// Source record of each row.
    pub record_index: Vec<usize>,
    pub exclusions: ExclusionReport,
}

/// Why records were left out. A record missing several fields is counted
/// under each of them.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ExclusionReport {
    pub total_records: usize,
    pub used: usize,
    pub missing_age: usize,
    pub missing_sex: usize,
    pub missing_outcome: usize,
}

impl DesignMatrix {
    /// Builds a matrix from raw rows. Rows must match the column count and
    /// outcomes must be 0 or 1.
    pub fn new(columns: Vec<String>, rows: Vec<Vec<f64>>, y: Vec<u8>) -> Result<Self, RiskError> {
        if rows.is_empty() {
            return Err(RiskError::NoUsableRows);
        }
        if rows.len() != y.len() {
            return Err(RiskError::OutcomeLength {
                rows: rows.len(),
                outcomes: y.len(),
            });
        }
        for (i, r) in rows.iter().enumerate() {
            if r.len() != columns.len() {
                return Err(RiskError::DimensionMismatch {
                    row: i,
                    expected: columns.len(),
                    got: r.len(),
                });
            }
            if r.iter().any(|v| !v.is_finite()) {
                return Err(RiskError::NonFinite);
            }
        }
        if y.iter().any(|&v| v > 1) {
            return Err(RiskError::NonBinaryOutcome);
        }
        let n = rows.len();
        Ok(Self {
            columns,
            rows,
            y,
            record_index: (0..n).collect(),
            exclusions: ExclusionReport {
                total_records: n,
                used: n,
                ..Default::default()
            },
        })
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.columns.len()
    }

    /// True when every outcome is the same; fitting will then fail.
    pub fn single_class(&self) -> bool {
        self.y.iter().all(|&v| v == self.y[0])
    }

    pub fn class_counts(&self) -> [usize; 2] {
        let pos = self.y.iter().filter(|&&v| v == 1).count();
        [self.y.len() - pos, pos]
    }

    /// Rows selected by index, keeping columns and record mapping.
    pub fn subset(&self, idx: &[usize]) -> Self {
        Self {
            columns: self.columns.clone(),
            rows: idx.iter().map(|&i| self.rows[i].clone()).collect(),
            y: idx.iter().map(|&i| self.y[i]).collect(),
            record_index: idx.iter().map(|&i| self.record_index[i]).collect(),
            exclusions: ExclusionReport {
                total_records: idx.len(),
                used: idx.len(),
                ..Default::default()
            },
        }
    }
}

/// Column layout: intercept, age, sex_female, chronic_disease, then one
/// column per symptom. Only records with age, sex and outcome present are
/// used. An absent chronic-disease flag counts as 0, and so do the symptoms
/// of a record that has no row in `indicators`.
pub fn build_design_matrix(
    records: &[PatientRecord],
    indicators: &IndicatorMatrix,
) -> Result<DesignMatrix, RiskError> {
    let mut columns: Vec<String> = ["intercept", "age", "sex_female", "chronic_disease"]
        .map(String::from)
        .into();
    columns.extend(indicators.columns.iter().cloned());

    let mut report = ExclusionReport {
        total_records: records.len(),
        ..Default::default()
    };
    let (mut rows, mut y, mut record_index) = (Vec::new(), Vec::new(), Vec::new());
    let zeros = vec![0u8; indicators.columns.len()];
    for (i, rec) in records.iter().enumerate() {
        report.missing_age += usize::from(rec.age.is_none());
        report.missing_sex += usize::from(rec.sex.is_none());
        report.missing_outcome += usize::from(rec.outcome.is_none());
        let (Some(age), Some(sex), Some(outcome)) = (rec.age, rec.sex, rec.outcome) else {
            continue;
        };
        let symptoms = indicators.row_for_record(i).unwrap_or(&zeros);
        let mut row = vec![
            1.0,
            age,
            f64::from(u8::from(sex == Sex::Female)),
            f64::from(u8::from(rec.chronic_disease.unwrap_or(false))),
        ];
        row.extend(symptoms.iter().map(|&v| f64::from(v)));
        rows.push(row);
        y.push(u8::from(outcome == Outcome::Died));
        record_index.push(i);
    }
    if rows.is_empty() {
        return Err(RiskError::NoUsableRows);
    }
    report.used = rows.len();
    Ok(DesignMatrix {
        columns,
        rows,
        y,
        record_index,
        exclusions: report,
    })
}
