use serde::Serialize;

use super::arima::{filter_demeaned, ArimaModel, ArimaOrder};
use super::difference::{difference, undifference};
use super::statespace::ArmaStateSpace;
use super::ForecastError;

/// 97.5% standard-normal quantile.
const Z_95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ForecastResult {
    pub horizon: usize,
    pub point: Vec<f64>,
    pub lower95: Vec<f64>,
    pub upper95: Vec<f64>,
    pub order: ArimaOrder,
    pub aic: f64,
}

/// ψ-weights ψ₀..ψ_{h−1} of θ(B) / (φ(B)(1 − B)^d).
pub fn psi_weights(ar: &[f64], ma: &[f64], d: usize, h: usize) -> Vec<f64> {
    // coefficients of 1 − Σ φ*_i B^i = φ(B)(1 − B)^d, stored as φ*
    let mut poly = vec![1.0];
    poly.extend(ar.iter().map(|c| -c));
    for _ in 0..d {
        let mut next = vec![0.0; poly.len() + 1];
        for (i, &c) in poly.iter().enumerate() {
            next[i] += c;
            next[i + 1] -= c;
        }
        poly = next;
    }
    let phi_star: Vec<f64> = poly[1..].iter().map(|c| -c).collect();

    let mut psi = Vec::with_capacity(h);
    for j in 0..h {
        let mut v = if j == 0 {
            1.0
        } else {
            ma.get(j - 1).copied().unwrap_or(0.0)
        };
        for (i, &phi) in phi_star.iter().enumerate() {
            if i < j {
                v += phi * psi[j - i - 1];
            }
        }
        psi.push(v);
    }
    psi
}

/// h-step forecasts from the end of `history` (the undifferenced series the
/// model describes). Points come from the Kalman-filtered state propagated
/// through the ARMA recursion and are then integrated d times; the 95%
/// band uses σ² Σ ψ_j² of the integrated model.
pub fn forecast(
    model: &ArimaModel,
    history: &[f64],
    horizon: usize,
) -> Result<ForecastResult, ForecastError> {
    if horizon == 0 {
        return Err(ForecastError::ZeroHorizon);
    }
    let d = model.order.d;
    let w = difference(history, d)?;
    let mu = if model.include_intercept {
        model.mean()
    } else {
        0.0
    };
    let filtered =
        filter_demeaned(&w, &model.ar, &model.ma, mu).ok_or(ForecastError::LikelihoodFailure)?;

    let ss = ArmaStateSpace::new(&model.ar, &model.ma);
    let mut state = filtered.next_state;
    let mut diffed = Vec::with_capacity(horizon);
    for _ in 0..horizon {
        diffed.push(mu + state[0]);
        state = ss.transition(&state);
    }
    let point = undifference(&diffed, &history[history.len() - d..])?;

    let psi = psi_weights(&model.ar, &model.ma, d, horizon);
    let mut cumulative = 0.0;
    let mut prev_width = 0.0;
    let (mut lower95, mut upper95) = (Vec::with_capacity(horizon), Vec::with_capacity(horizon));
    for (p, psi_j) in point.iter().zip(&psi) {
        cumulative += psi_j * psi_j;
        let half = Z_95 * (model.innovation_variance * cumulative).sqrt();
        let lower = p - half;
        let mut upper = p + half;
        // Once the band has converged, rounding in p ± half can shrink it by an ulp.
        while upper - lower < prev_width {
            upper = upper.next_up();
        }
        prev_width = upper - lower;
        lower95.push(lower);
        upper95.push(upper);
    }
    Ok(ForecastResult {
        horizon,
        point,
        lower95,
        upper95,
        order: model.order,
        aic: model.aic,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn psi_of_ar1_is_geometric() {
        let psi = psi_weights(&[0.5], &[], 0, 4);
        assert_eq!(psi, vec![1.0, 0.5, 0.25, 0.125]);
    }

    #[test]
    fn psi_of_random_walk_is_all_ones() {
        assert_eq!(psi_weights(&[], &[], 1, 5), vec![1.0; 5]);
    }

    #[test]
    fn psi_of_ima11() {
        // (1 + θB)/(1 − B): ψ₀ = 1, ψ_j = 1 + θ
        let psi = psi_weights(&[], &[0.4], 1, 4);
        for v in &psi[1..] {
            assert!((v - 1.4).abs() < 1e-15);
        }
    }

    #[test]
    fn zero_horizon_rejected() {
        let x: Vec<f64> = (0..30).map(|i| (i as f64 * 0.7).sin()).collect();
        let m = ArimaModel::evaluate(&x, ArimaOrder::new(0, 0, 0), &[], &[], Some(0.0)).unwrap();
        assert_eq!(forecast(&m, &x, 0), Err(ForecastError::ZeroHorizon));
    }
}
