//! Mapping between unconstrained optimizer coordinates and ARMA
//! coefficients. Each coordinate goes through tanh to a partial
//! autocorrelation in (−1, 1), and the Durbin–Levinson recursion turns the
//! partial autocorrelations into a stationary AR polynomial. MA
//! coefficients reuse the map with a sign flip, which yields invertibility.

/// Partial autocorrelations to AR coefficients φ₁..φₚ.
pub fn pacf_to_ar(pacf: &[f64]) -> Vec<f64> {
    let mut phi: Vec<f64> = Vec::with_capacity(pacf.len());
    for (k, &r) in pacf.iter().enumerate() {
        let prev = phi.clone();
        for j in 0..k {
            phi[j] = prev[j] - r * prev[k - 1 - j];
        }
        phi.push(r);
    }
    phi
}

/// AR coefficients back to partial autocorrelations. `None` when the
/// polynomial is not stationary (some |r_k| ≥ 1).
pub fn ar_to_pacf(phi: &[f64]) -> Option<Vec<f64>> {
    let p = phi.len();
    let mut cur = phi.to_vec();
    let mut pacf = vec![0.0; p];
    for k in (0..p).rev() {
        let r = cur[k];
        if !r.is_finite() || r.abs() >= 1.0 {
            return None;
        }
        pacf[k] = r;
        let denom = 1.0 - r * r;
        let prev: Vec<f64> = (0..k)
            .map(|j| (cur[j] + r * cur[k - 1 - j]) / denom)
            .collect();
        cur = prev;
    }
    Some(pacf)
}

pub fn is_stationary(phi: &[f64]) -> bool {
    ar_to_pacf(phi).is_some()
}

pub fn is_invertible(theta: &[f64]) -> bool {
    let neg: Vec<f64> = theta.iter().map(|t| -t).collect();
    ar_to_pacf(&neg).is_some()
}

/// True when every root of 1 − Σ φ_i z^i has modulus above `radius`.
/// Substituting z = radius·w reduces this to a stationarity check.
pub fn ar_roots_exceed(phi: &[f64], radius: f64) -> bool {
    let scaled: Vec<f64> = phi
        .iter()
        .zip(1..)
        .map(|(c, i)| c * radius.powi(i))
        .collect();
    is_stationary(&scaled)
}

/// Same as [`ar_roots_exceed`] for 1 + Σ θ_j z^j.
pub fn ma_roots_exceed(theta: &[f64], radius: f64) -> bool {
    let neg: Vec<f64> = theta.iter().map(|t| -t).collect();
    ar_roots_exceed(&neg, radius)
}

const MAX_PACF: f64 = 1.0 - 1e-12;

pub fn ar_from_unconstrained(u: &[f64]) -> Vec<f64> {
    let r: Vec<f64> = u
        .iter()
        .map(|x| x.tanh().clamp(-MAX_PACF, MAX_PACF))
        .collect();
    pacf_to_ar(&r)
}

pub fn ma_from_unconstrained(u: &[f64]) -> Vec<f64> {
    ar_from_unconstrained(u).into_iter().map(|c| -c).collect()
}

pub fn ar_to_unconstrained(phi: &[f64]) -> Option<Vec<f64>> {
    ar_to_pacf(phi).map(|r| r.into_iter().map(f64::atanh).collect())
}

pub fn ma_to_unconstrained(theta: &[f64]) -> Option<Vec<f64>> {
    let neg: Vec<f64> = theta.iter().map(|t| -t).collect();
    ar_to_unconstrained(&neg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn root_margin() {
        // root of 1 − 0.995 z is 1.005
        assert!(ar_roots_exceed(&[0.995], 1.0));
        assert!(!ar_roots_exceed(&[0.995], 1.01));
        assert!(ma_roots_exceed(&[0.5], 1.01));
        assert!(!ma_roots_exceed(&[0.0, 0.999_999], 1.01));
    }

    #[test]
    fn ar2_round_trip() {
        let phi = [0.5, 0.3];
        let u = ar_to_unconstrained(&phi).unwrap();
        let back = ar_from_unconstrained(&u);
        for (a, b) in phi.iter().zip(&back) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn ar1_is_its_own_pacf() {
        assert_eq!(pacf_to_ar(&[0.7]), vec![0.7]);
        assert_eq!(ar_to_pacf(&[-0.2]), Some(vec![-0.2]));
    }

    #[test]
    fn stationarity_boundaries() {
        assert!(is_stationary(&[0.99]));
        assert!(!is_stationary(&[1.0]));
        // φ₁ + φ₂ < 1 violated
        assert!(!is_stationary(&[0.6, 0.5]));
        assert!(is_invertible(&[0.5]));
        assert!(!is_invertible(&[-1.2]));
        assert!(is_stationary(&[]));
    }

    #[test]
    fn any_coordinates_give_stationary_ar() {
        let u = [3.0, -2.5, 0.4, 7.0];
        assert!(is_stationary(&ar_from_unconstrained(&u)));
        assert!(is_invertible(&ma_from_unconstrained(&u)));
    }
}
