use serde::Serialize;

use super::special::normal_quantile;
use super::{SampleSummary, StatError};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QqPoint {
    pub theoretical: f64,
    pub sample: f64,
}

/// Normal QQ pairs: the standardized, sorted sample against Φ⁻¹((i − 0.5)/n).
pub fn qq_points(sample: &[f64]) -> Result<Vec<QqPoint>, StatError> {
    if sample.len() < 3 {
        return Err(StatError::TooFewObservations {
            needed: 3,
            got: sample.len(),
        });
    }
    let summary = SampleSummary::from_sample(sample)?;
    if summary.variance == 0.0 {
        return Err(StatError::ZeroVariance);
    }
    let sd = summary.variance.sqrt();
    let mut sorted = sample.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    Ok(sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| QqPoint {
            theoretical: normal_quantile((i as f64 + 0.5) / n),
            sample: (x - summary.mean) / sd,
        })
        .collect())
}
