use std::path::Path;

use serde::Serialize;
use thiserror::Error;

use epitrack_core::forecast::ForecastError;
use epitrack_core::ingest::IngestError;
use epitrack_core::riskmodel::RiskError;
use epitrack_core::stattest::StatError;
use epitrack_core::textmine::TextError;
use epitrack_core::transform::TransformError;

/// Error surfaced to the user as a single JSON record.
#[derive(Debug, Error)]
#[error("{message}")]
pub struct CliError {
    pub kind: &'static str,
    pub message: String,
}

#[derive(Serialize)]
struct Record<'a> {
    error: Inner<'a>,
}

#[derive(Serialize)]
struct Inner<'a> {
    kind: &'a str,
    message: &'a str,
    exit_code: u8,
}

impl CliError {
    pub fn new(kind: &'static str, message: impl Into<String>) -> Self {
        Self {
            kind,
            message: message.into(),
        }
    }

    pub fn usage(message: String) -> Self {
        Self::new("usage", message)
    }

    pub fn io(path: &Path, e: std::io::Error) -> Self {
        Self::new("io", format!("{}: {e}", path.display()))
    }

    pub fn exit_code(&self) -> u8 {
        match self.kind {
            "usage" => 2,
            "no_data_available" => 3,
            _ => 1,
        }
    }

    pub fn to_json(&self) -> String {
        let record = Record {
            error: Inner {
                kind: self.kind,
                message: &self.message,
                exit_code: self.exit_code(),
            },
        };
        serde_json::to_string(&record).expect("error record serializes")
    }
}

impl From<IngestError> for CliError {
    fn from(e: IngestError) -> Self {
        let kind = match e {
            IngestError::NoDataAvailable { .. } => "no_data_available",
            IngestError::CacheLocked(_) => "cache_locked",
            _ => "ingest",
        };
        Self::new(kind, e.to_string())
    }
}

macro_rules! kind_from {
    ($($ty:ty => $kind:literal),* $(,)?) => {
        $(impl From<$ty> for CliError {
            fn from(e: $ty) -> Self {
                Self::new($kind, e.to_string())
            }
        })*
    };
}

kind_from! {
    TransformError => "transform",
    ForecastError => "forecast",
    TextError => "textmine",
    RiskError => "riskmodel",
    StatError => "stattest",
    csv::Error => "csv",
    serde_json::Error => "serialize",
}
