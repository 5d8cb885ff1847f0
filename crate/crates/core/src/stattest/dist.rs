//! Lower- and upper-tail probabilities for the four reference distributions
//! the hypothesis tests need.

use serde::Serialize;

use super::special::{beta_inc, gamma_p, gamma_q, normal_cdf, normal_sf};
use super::StatError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Distribution {
    Normal,
    StudentT { df: f64 },
    F { df1: f64, df2: f64 },
    ChiSquare { df: f64 },
}

impl Distribution {
    fn validate(&self) -> Result<(), StatError> {
        let ok = |v: f64| v.is_finite() && v > 0.0;
        let valid = match *self {
            Distribution::Normal => true,
            Distribution::StudentT { df } | Distribution::ChiSquare { df } => ok(df),
            Distribution::F { df1, df2 } => ok(df1) && ok(df2),
        };
        if valid {
            Ok(())
        } else {
            Err(StatError::InvalidParameter(format!(
                "degrees of freedom for {self:?}"
            )))
        }
    }

    /// P(X ≤ x).
    pub fn cdf(&self, x: f64) -> Result<f64, StatError> {
        self.validate()?;
        if x.is_nan() {
            return Err(StatError::InvalidParameter("x is NaN".into()));
        }
        Ok(match *self {
            Distribution::Normal => normal_cdf(x),
            Distribution::StudentT { df } => {
                let tail = 0.5 * beta_inc(df / 2.0, 0.5, df / (df + x * x));
                if x > 0.0 {
                    1.0 - tail
                } else {
                    tail
                }
            }
            Distribution::F { df1, df2 } => {
                if x <= 0.0 {
                    0.0
                } else {
                    beta_inc(df1 / 2.0, df2 / 2.0, df1 * x / (df1 * x + df2))
                }
            }
            Distribution::ChiSquare { df } => gamma_p(df / 2.0, x.max(0.0) / 2.0),
        })
    }

    /// P(X > x), computed directly so small tails keep their precision.
    pub fn sf(&self, x: f64) -> Result<f64, StatError> {
        self.validate()?;
        if x.is_nan() {
            return Err(StatError::InvalidParameter("x is NaN".into()));
        }
        Ok(match *self {
            Distribution::Normal => normal_sf(x),
            Distribution::StudentT { df } => {
                let tail = 0.5 * beta_inc(df / 2.0, 0.5, df / (df + x * x));
                if x > 0.0 {
                    tail
                } else {
                    1.0 - tail
                }
            }
            Distribution::F { df1, df2 } => {
                if x <= 0.0 {
                    1.0
                } else {
                    beta_inc(df2 / 2.0, df1 / 2.0, df2 / (df2 + df1 * x))
                }
            }
            Distribution::ChiSquare { df } => gamma_q(df / 2.0, x.max(0.0) / 2.0),
        })
    }
}
