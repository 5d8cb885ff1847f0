//! Exact Gaussian likelihood of a zero-mean ARMA(p, q) via its state-space
//! form and the Kalman filter (prediction-error decomposition).
//!
//! State dimension r = max(p, q + 1). The transition matrix T carries the
//! AR coefficients in its first column and ones on the superdiagonal; the
//! disturbance loading is R = (1, θ₁, …, θ_{r−1}); the observation picks
//! the first state element. The filter runs with unit innovation variance
//! so σ² can be profiled out afterwards.

use nalgebra::{DMatrix, DVector};

const MIN_PREDICTION_VARIANCE: f64 = 1e-12;

pub(crate) struct ArmaStateSpace {
    r: usize,
    /// first column of T
    phi: Vec<f64>,
    /// R vector
    loading: Vec<f64>,
}

/// Everything the likelihood and the forecaster need from one filter pass.
pub(crate) struct FilterOutput {
    pub n: usize,
    pub sum_log_f: f64,
    /// Σ v_t² / F_t
    pub sum_scaled_sq: f64,
    #[allow(dead_code)] // inspected by tests
    pub innovations: Vec<f64>,
    /// predicted state a_{n+1|n}
    pub next_state: Vec<f64>,
}

impl FilterOutput {
    /// Profiled MLE of σ².
    pub fn sigma2(&self) -> f64 {
        self.sum_scaled_sq / self.n as f64
    }

    /// Exact log-likelihood with σ² at its profiled MLE.
    pub fn log_likelihood(&self) -> f64 {
        let n = self.n as f64;
        let sigma2 = self.sigma2();
        -0.5 * n * ((2.0 * std::f64::consts::PI * sigma2).ln() + 1.0) - 0.5 * self.sum_log_f
    }
}

impl ArmaStateSpace {
    pub fn new(ar: &[f64], ma: &[f64]) -> Self {
        let r = ar.len().max(ma.len() + 1);
        let mut phi = vec![0.0; r];
        phi[..ar.len()].copy_from_slice(ar);
        let mut loading = vec![0.0; r];
        loading[0] = 1.0;
        loading[1..=ma.len()].copy_from_slice(ma);
        Self { r, phi, loading }
    }

    /// (T x)_i = φ_i x_0 + x_{i+1}
    pub fn transition(&self, x: &[f64]) -> Vec<f64> {
        (0..self.r)
            .map(|i| self.phi[i] * x[0] + if i + 1 < self.r { x[i + 1] } else { 0.0 })
            .collect()
    }

    fn transition_matrix(&self) -> DMatrix<f64> {
        let r = self.r;
        DMatrix::from_fn(r, r, |i, j| {
            if j == 0 {
                self.phi[i]
            } else if j == i + 1 {
                1.0
            } else {
                0.0
            }
        })
    }

    /// Stationary state covariance: solves P = T P Tᵀ + R Rᵀ through
    /// (I − T⊗T) vec(P) = vec(R Rᵀ).
    pub fn stationary_covariance(&self) -> Option<DMatrix<f64>> {
        let r = self.r;
        let t = self.transition_matrix();
        let r2 = r * r;
        let kron = t.kronecker(&t);
        let lhs = DMatrix::<f64>::identity(r2, r2) - kron;
        let rrt = DVector::from_fn(r2, |idx, _| {
            let (col, row) = (idx / r, idx % r);
            self.loading[row] * self.loading[col]
        });
        let sol = lhs.lu().solve(&rrt)?;
        if sol.iter().any(|v| !v.is_finite()) {
            return None;
        }
        let p = DMatrix::from_fn(r, r, |i, j| 0.5 * (sol[j * r + i] + sol[i * r + j]));
        if p[(0, 0)] <= 0.0 {
            return None;
        }
        Some(p)
    }

    /// Runs the filter over a demeaned series. Returns `None` when the
    /// initial covariance cannot be formed or a prediction variance
    /// collapses.
    pub fn filter(&self, data: &[f64]) -> Option<FilterOutput> {
        let r = self.r;
        let p0 = self.stationary_covariance()?;
        // row-major r×r buffers
        let mut p: Vec<f64> = (0..r * r).map(|k| p0[(k / r, k % r)]).collect();
        let mut next = vec![0.0; r * r];
        let mut a = vec![0.0; r];
        let mut tp = vec![0.0; r * r];
        let mut k = vec![0.0; r];

        let mut sum_log_f = 0.0;
        let mut sum_scaled_sq = 0.0;
        let mut innovations = Vec::with_capacity(data.len());

        for &y in data {
            let v = y - a[0];
            let f = p[0];
            if !(f > MIN_PREDICTION_VARIANCE) || !f.is_finite() {
                return None;
            }
            sum_log_f += f.ln();
            sum_scaled_sq += v * v / f;
            innovations.push(v);

            // TP: row i is φ_i P[0,·] + P[i+1,·]
            for i in 0..r {
                for j in 0..r {
                    let below = if i + 1 < r { p[(i + 1) * r + j] } else { 0.0 };
                    tp[i * r + j] = self.phi[i] * p[j] + below;
                }
            }
            // K = T P Z' / F is the first column of TP over F
            for i in 0..r {
                k[i] = tp[i * r] / f;
            }
            let ta = self.transition(&a);
            for i in 0..r {
                a[i] = ta[i] + k[i] * v;
            }
            // P' = (TP) Tᵀ + R Rᵀ − K Kᵀ F, with (TP Tᵀ)[i,j] = φ_j TP[i,0] + TP[i,j+1]
            for i in 0..r {
                for j in 0..r {
                    let right = if j + 1 < r { tp[i * r + j + 1] } else { 0.0 };
                    next[i * r + j] =
                        self.phi[j] * tp[i * r] + right + self.loading[i] * self.loading[j]
                            - k[i] * k[j] * f;
                }
            }
            // keep P symmetric against rounding drift
            for i in 0..r {
                for j in 0..r {
                    p[i * r + j] = 0.5 * (next[i * r + j] + next[j * r + i]);
                }
            }
        }

        let out = FilterOutput {
            n: data.len(),
            sum_log_f,
            sum_scaled_sq,
            innovations,
            next_state: a,
        };
        if out.sum_scaled_sq.is_finite() && out.sum_scaled_sq > 0.0 {
            Some(out)
        } else {
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ar1_stationary_variance() {
        let ss = ArmaStateSpace::new(&[0.6], &[]);
        let p = ss.stationary_covariance().unwrap();
        assert!((p[(0, 0)] - 1.0 / (1.0 - 0.36)).abs() < 1e-12);
    }

    #[test]
    fn ma1_stationary_variance() {
        let ss = ArmaStateSpace::new(&[], &[0.4]);
        let p = ss.stationary_covariance().unwrap();
        assert!((p[(0, 0)] - (1.0 + 0.16)).abs() < 1e-12);
    }

    #[test]
    fn arma11_variance_matches_closed_form() {
        let (phi, theta) = (0.5_f64, 0.3_f64);
        let ss = ArmaStateSpace::new(&[phi], &[theta]);
        let p = ss.stationary_covariance().unwrap();
        let gamma0 = (1.0 + 2.0 * phi * theta + theta * theta) / (1.0 - phi * phi);
        assert!((p[(0, 0)] - gamma0).abs() < 1e-12);
    }

    #[test]
    fn white_noise_likelihood_is_iid_gaussian() {
        let data = [0.5, -1.2, 0.3, 2.0, -0.7];
        let out = ArmaStateSpace::new(&[], &[]).filter(&data).unwrap();
        let n = data.len() as f64;
        let s2 = data.iter().map(|x| x * x).sum::<f64>() / n;
        let expected = -0.5 * n * ((2.0 * std::f64::consts::PI * s2).ln() + 1.0);
        assert!((out.log_likelihood() - expected).abs() < 1e-12);
        assert!((out.sigma2() - s2).abs() < 1e-15);
    }

    #[test]
    fn ar1_innovations_after_first_step_are_residuals() {
        let data = [1.0, 2.0, -0.5, 0.25];
        let phi = 0.5;
        let out = ArmaStateSpace::new(&[phi], &[]).filter(&data).unwrap();
        for t in 1..data.len() {
            assert!((out.innovations[t] - (data[t] - phi * data[t - 1])).abs() < 1e-12);
        }
        assert!((out.next_state[0] - phi * 0.25).abs() < 1e-12);
    }
}
