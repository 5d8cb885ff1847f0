use std::path::Path;

use serde::Serialize;
use tracing::warn;

use epitrack_core::riskmodel::{
    build_design_matrix, fit_logistic, fit_logistic_with, kfold_cross_validate, wald_test,
    CvOptions, CvSummary, DesignMatrix, ExclusionReport, GlmFit, LogisticOptions, RiskError,
    WaldTest,
};
use epitrack_core::textmine::{build_indicator_matrix, AbsentTextPolicy};

use crate::config::{Command, RunConfig};
use crate::error::CliError;
use crate::provenance::{Inputs, Reporter};
use crate::svg::{Chart, YScale};

/// Leading columns that are always kept: intercept, age, sex, chronic disease.
const FIXED_COLUMNS: usize = 4;
const FALLBACK_RIDGE: f64 = 1e-2;

#[derive(Serialize)]
struct CoefficientRow<'a> {
    variable: &'a str,
    estimate: f64,
    std_error: f64,
    z_value: f64,
    p_value: f64,
    separation_flag: bool,
}

#[derive(Serialize)]
struct RiskReport<'a> {
    exclusions: &'a ExclusionReport,
    /// Symptom columns with no positive row, left out of the model.
    dropped_columns: &'a [String],
    fit: &'a GlmFit,
    wald: &'a [WaldTest],
    cross_validation: &'a CvSummary,
}

/// Removes symptom columns that are zero in every row; they carry no
/// information and make the information matrix singular.
fn drop_empty_symptoms(design: &DesignMatrix) -> Result<(DesignMatrix, Vec<String>), RiskError> {
    let keep: Vec<usize> = (0..design.n_cols())
        .filter(|&j| j < FIXED_COLUMNS || design.rows.iter().any(|r| r[j] != 0.0))
        .collect();
    let dropped = (0..design.n_cols())
        .filter(|j| !keep.contains(j))
        .map(|j| design.columns[j].clone())
        .collect();
    let columns = keep.iter().map(|&j| design.columns[j].clone()).collect();
    let rows = design
        .rows
        .iter()
        .map(|r| keep.iter().map(|&j| r[j]).collect())
        .collect();
    Ok((DesignMatrix::new(columns, rows, design.y.clone())?, dropped))
}

pub fn run(cfg: &RunConfig, cmd: &Command, linelist: &Path) -> Result<(), CliError> {
    let mut inputs = Inputs::default();
    let list = super::load_line_list(cfg, &mut inputs, &linelist.to_path_buf())?;
    let dict = super::load_dictionary(cfg, &mut inputs)?;
    let indicators = build_indicator_matrix(&list.records, &dict, AbsentTextPolicy::Exclude);
    let full = build_design_matrix(&list.records, &indicators)?;
    let (design, dropped) = drop_empty_symptoms(&full)?;

    let fit = match fit_logistic(&design) {
        Err(RiskError::SingularInformation) => {
            warn!(
                ridge = FALLBACK_RIDGE,
                "information matrix singular, refitting with a ridge penalty"
            );
            fit_logistic_with(
                &design,
                &LogisticOptions {
                    ridge: FALLBACK_RIDGE,
                    ..Default::default()
                },
            )?
        }
        other => other?,
    };
    let wald = (0..fit.coefficients.len())
        .map(|j| {
            wald_test(&fit, j).map(|mut w| {
                w.result = w.result.with_alpha(cfg.alpha);
                w
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let cv = kfold_cross_validate(
        &design,
        &CvOptions {
            k: cfg.k,
            seed: cfg.seed,
            ..Default::default()
        },
    )?;

    let rows: Vec<CoefficientRow> = (0..fit.coefficients.len())
        .map(|j| CoefficientRow {
            variable: &fit.columns[j],
            estimate: fit.coefficients[j],
            std_error: fit.standard_errors[j],
            z_value: fit.z_values[j],
            p_value: fit.p_values[j],
            separation_flag: fit.separation_flags[j],
        })
        .collect();

    let reporter = Reporter::new(cfg, cmd, &inputs)?;
    reporter.csv("risk_coefficients.csv", &rows)?;
    reporter.json(
        "risk.json",
        &RiskReport {
            exclusions: &full.exclusions,
            dropped_columns: &dropped,
            fit: &fit,
            wald: &wald,
            cross_validation: &cv,
        },
    )?;
    reporter.svg("roc.svg", &roc_chart(&cv))?;
    Ok(())
}

fn roc_chart(cv: &CvSummary) -> String {
    let pts: Vec<(f64, f64)> = cv.roc.points.iter().map(|p| (p.fpr, p.tpr)).collect();
    let mut c = Chart::new(
        &format!(
            "ROC curve, {}-fold cross-validation (AUROC {:.3})",
            cv.k, cv.auroc
        ),
        "false positive rate",
        "true positive rate",
        (0.0, 1.0),
        (0.0, 1.0),
        YScale::Linear,
    );
    c.line(
        &[(0.0, 0.0), (1.0, 1.0)],
        "#999999",
        true,
        "random classifier",
    );
    c.line(&pts, "#d95f02", false, "held-out predictions");
    c.render()
}
