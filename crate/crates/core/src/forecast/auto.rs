//! Automatic order selection: KPSS picks d, then a stepwise neighbourhood
//! search over (p, q) keeps moving to the lowest-AIC neighbour until none
//! improves on the incumbent.

use std::collections::BTreeMap;

use serde::Serialize;
use tracing::debug;

use super::arima::{fit_arima, ArimaModel, ArimaOrder, MAX_D, MAX_P, MAX_Q};
use super::kpss::select_differencing;
use super::params::{ar_roots_exceed, ma_roots_exceed};
use super::ForecastError;

pub const AUTO_MIN_LEN: usize = 20;

/// Candidates with an AR or MA root this close to the unit circle are
/// discarded as boundary fits.
pub const MIN_ROOT_MODULUS: f64 = 1.01;

const STEPWISE_STARTS: [(usize, usize); 4] = [(0, 0), (1, 0), (0, 1), (2, 2)];
const NEIGHBOUR_OFFSETS: [(i64, i64); 8] = [
    (-1, 0),
    (1, 0),
    (0, -1),
    (0, 1),
    (-1, -1),
    (1, 1),
    (-1, 1),
    (1, -1),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchStrategy {
    Stepwise,
    /// Every (p, q) in the bounds; used as a reference for the stepwise path.
    Exhaustive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AutoArimaOptions {
    pub max_p: usize,
    pub max_q: usize,
    pub max_d: usize,
    pub strategy: SearchStrategy,
}

impl Default for AutoArimaOptions {
    fn default() -> Self {
        Self {
            max_p: MAX_P,
            max_q: MAX_Q,
            max_d: MAX_D,
            strategy: SearchStrategy::Stepwise,
        }
    }
}

/// One evaluated candidate. `aic` is `None` when the fit failed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Candidate {
    pub order: ArimaOrder,
    pub aic: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AutoArimaReport {
    pub model: ArimaModel,
    /// Candidates in evaluation order.
    pub candidates: Vec<Candidate>,
    pub failed: usize,
}

/// Selects and fits the minimum-AIC model with default options.
pub fn auto_arima(values: &[f64]) -> Result<ArimaModel, ForecastError> {
    auto_arima_with(values, &AutoArimaOptions::default()).map(|r| r.model)
}

pub fn auto_arima_with(
    values: &[f64],
    opts: &AutoArimaOptions,
) -> Result<AutoArimaReport, ForecastError> {
    if values.len() < AUTO_MIN_LEN {
        return Err(ForecastError::TooShort {
            needed: AUTO_MIN_LEN,
            got: values.len(),
        });
    }
    let max_p = opts.max_p.min(MAX_P);
    let max_q = opts.max_q.min(MAX_Q);
    let d = select_differencing(values, opts.max_d.min(MAX_D))?;
    let include_intercept = d == 0;
    debug!(d, "differencing degree selected");

    let mut search = Search {
        values,
        d,
        include_intercept,
        fitted: BTreeMap::new(),
        log: Vec::new(),
    };

    match opts.strategy {
        SearchStrategy::Exhaustive => {
            for p in 0..=max_p {
                for q in 0..=max_q {
                    search.evaluate(p, q);
                }
            }
        }
        SearchStrategy::Stepwise => {
            let mut incumbent: Option<(usize, usize)> = None;
            for &(p, q) in STEPWISE_STARTS
                .iter()
                .filter(|(p, q)| *p <= max_p && *q <= max_q)
            {
                search.evaluate(p, q);
                incumbent = search.better(incumbent, (p, q));
            }
            while let Some((p, q)) = incumbent {
                let mut best = incumbent;
                for (dp, dq) in NEIGHBOUR_OFFSETS {
                    let (np, nq) = (p as i64 + dp, q as i64 + dq);
                    if np < 0 || nq < 0 || np as usize > max_p || nq as usize > max_q {
                        continue;
                    }
                    let cand = (np as usize, nq as usize);
                    search.evaluate(cand.0, cand.1);
                    best = search.better(best, cand);
                }
                if best == incumbent {
                    break;
                }
                incumbent = best;
            }
        }
    }

    let failed = search.log.iter().filter(|c| c.aic.is_none()).count();
    let Search { fitted, log, .. } = search;
    // first-evaluated wins ties, matching the stepwise incumbent rule
    let best_order = log
        .iter()
        .filter_map(|c| c.aic.map(|a| (c.order, a)))
        .fold(None::<(ArimaOrder, f64)>, |acc, (o, a)| match acc {
            Some((_, best)) if best <= a => acc,
            _ => Some((o, a)),
        })
        .map(|(o, _)| (o.p, o.q))
        .ok_or(ForecastError::NoCandidateConverged)?;
    let model = fitted
        .get(&best_order)
        .cloned()
        .flatten()
        .expect("best candidate was fitted");
    Ok(AutoArimaReport {
        model,
        candidates: log,
        failed,
    })
}

struct Search<'a> {
    values: &'a [f64],
    d: usize,
    include_intercept: bool,
    fitted: BTreeMap<(usize, usize), Option<ArimaModel>>,
    log: Vec<Candidate>,
}

impl Search<'_> {
    fn evaluate(&mut self, p: usize, q: usize) {
        if self.fitted.contains_key(&(p, q)) {
            return;
        }
        let order = ArimaOrder::new(p, self.d, q);
        let result = fit_arima(self.values, order, self.include_intercept).and_then(|m| {
            if !ar_roots_exceed(&m.ar, MIN_ROOT_MODULUS)
                || !ma_roots_exceed(&m.ma, MIN_ROOT_MODULUS)
            {
                Err(ForecastError::NearUnitRoot(order))
            } else {
                Ok(m)
            }
        });
        let (aic, error) = match &result {
            Ok(m) => (Some(m.aic), None),
            Err(e) => (None, Some(e.to_string())),
        };
        debug!(%order, ?aic, "candidate evaluated");
        self.log.push(Candidate { order, aic, error });
        self.fitted.insert((p, q), result.ok());
    }

    fn aic(&self, key: (usize, usize)) -> Option<f64> {
        self.fitted
            .get(&key)
            .and_then(|m| m.as_ref())
            .map(|m| m.aic)
    }

    /// Strict improvement is required to displace the current choice.
    fn better(
        &self,
        current: Option<(usize, usize)>,
        cand: (usize, usize),
    ) -> Option<(usize, usize)> {
        match (current.and_then(|c| self.aic(c)), self.aic(cand)) {
            (_, None) => current,
            (None, Some(_)) => Some(cand),
            (Some(a), Some(b)) if b < a => Some(cand),
            _ => current,
        }
    }
}
