//! One module per subcommand.

mod demog;
mod fetch;
mod overview;
mod risk;
mod symptoms;
mod trend;

use std::path::PathBuf;

use epitrack_core::textmine::{parse_line_list, LineList, SymptomDictionary};

use crate::config::{Cli, Command, RunConfig};
use crate::error::CliError;
use crate::provenance::Inputs;

pub fn run(cli: &Cli) -> Result<(), CliError> {
    let cfg = &cli.config;
    let cmd = &cli.command;
    match cmd {
        Command::Fetch {
            date,
            base_url,
            utc_offset,
            timeout_secs,
        } => fetch::run(
            cfg,
            cmd,
            date.as_deref(),
            base_url,
            *utc_offset,
            *timeout_secs,
        ),
        Command::Overview {
            report,
            population,
            level,
        } => overview::run(
            cfg,
            cmd,
            report.as_ref(),
            &cfg.data_file(population, "population.csv"),
            (*level).into(),
        ),
        Command::Trend { series, population } => {
            let default = format!(
                "time_series_{}.csv",
                epitrack_core::transform::Metric::from(cfg.metric)
            );
            trend::run(
                cfg,
                cmd,
                &cfg.data_file(series, &default),
                &cfg.data_file(population, "population.csv"),
            )
        }
        Command::Symptoms {
            linelist,
            ngram_max,
            min_count,
        } => symptoms::run(
            cfg,
            cmd,
            &linelist_path(cfg, linelist),
            *ngram_max,
            *min_count,
        ),
        Command::Risk { linelist } => risk::run(cfg, cmd, &linelist_path(cfg, linelist)),
        Command::Demog { linelist } => demog::run(cfg, cmd, &linelist_path(cfg, linelist)),
    }
}

fn linelist_path(cfg: &RunConfig, explicit: &Option<PathBuf>) -> PathBuf {
    cfg.data_file(explicit, "patients.csv")
}

fn load_line_list(
    cfg: &RunConfig,
    inputs: &mut Inputs,
    path: &PathBuf,
) -> Result<LineList, CliError> {
    let text = inputs.read(path)?;
    Ok(parse_line_list(&text, cfg.strict)?)
}

fn load_dictionary(cfg: &RunConfig, inputs: &mut Inputs) -> Result<SymptomDictionary, CliError> {
    match &cfg.dictionary {
        Some(path) => Ok(SymptomDictionary::from_toml(&inputs.read(path)?)?),
        None => Ok(SymptomDictionary::builtin()),
    }
}
