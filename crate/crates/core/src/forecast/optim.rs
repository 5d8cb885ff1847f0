//! BFGS minimizer with central-difference gradients and a backtracking
//! Armijo line search. Non-finite objective values are treated as +∞ and
//! simply backtracked away from.

const GRAD_STEP: f64 = 1e-5;
const ARMIJO_C: f64 = 1e-4;
const MAX_STEP_NORM: f64 = 5.0;

#[derive(Debug, Clone, Copy)]
pub(crate) struct BfgsOptions {
    pub max_iter: usize,
    /// stop when max |∂f/∂x_i| falls below this
    pub grad_tol: f64,
    /// stop when the relative decrease of f over an iteration falls below this
    pub rel_tol: f64,
}

impl Default for BfgsOptions {
    fn default() -> Self {
        Self {
            max_iter: 200,
            grad_tol: 1e-8,
            rel_tol: 1e-13,
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Central finite-difference gradient with step h·max(1, |x_i|).
pub fn central_gradient<F: Fn(&[f64]) -> f64>(f: &F, x: &[f64]) -> Vec<f64> {
    let mut xp = x.to_vec();
    (0..x.len())
        .map(|i| {
            let h = GRAD_STEP * x[i].abs().max(1.0);
            let orig = xp[i];
            xp[i] = orig + h;
            let fp = f(&xp);
            xp[i] = orig - h;
            let fm = f(&xp);
            xp[i] = orig;
            (fp - fm) / (2.0 * h)
        })
        .collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

fn identity(n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect()
}

pub(crate) fn minimize<F: Fn(&[f64]) -> f64>(f: F, x0: &[f64], opts: BfgsOptions) -> Minimum {
    let n = x0.len();
    let eval = |x: &[f64]| {
        let v = f(x);
        if v.is_finite() {
            v
        } else {
            f64::INFINITY
        }
    };
    let mut x = x0.to_vec();
    let mut fx = eval(&x);
    if n == 0 || !fx.is_finite() {
        return Minimum {
            x,
            value: fx,
            iterations: 0,
            converged: n == 0 && fx.is_finite(),
        };
    }
    let mut g = central_gradient(&eval, &x);
    let mut h = identity(n);

    for iter in 0..opts.max_iter {
        if max_abs(&g) < opts.grad_tol {
            return Minimum {
                x,
                value: fx,
                iterations: iter,
                converged: true,
            };
        }
        let mut dir: Vec<f64> = h.iter().map(|row| -dot(row, &g)).collect();
        if dot(&dir, &g) >= 0.0 {
            h = identity(n);
            dir = g.iter().map(|v| -v).collect();
        }
        let norm = dot(&dir, &dir).sqrt();
        if norm > MAX_STEP_NORM {
            dir.iter_mut().for_each(|d| *d *= MAX_STEP_NORM / norm);
        }

        let slope = dot(&dir, &g);
        let mut step = 1.0;
        let mut accepted = None;
        for _ in 0..60 {
            let trial: Vec<f64> = x.iter().zip(&dir).map(|(xi, di)| xi + step * di).collect();
            let ft = eval(&trial);
            if ft <= fx + ARMIJO_C * step * slope {
                accepted = Some((trial, ft));
                break;
            }
            step *= 0.5;
        }

        let Some((x_new, f_new)) = accepted else {
            // no descent along this direction: restart from steepest descent
            // once, otherwise we are at the attainable precision
            if h != identity(n) {
                h = identity(n);
                continue;
            }
            return Minimum {
                x,
                value: fx,
                iterations: iter,
                converged: max_abs(&g) < 1e-4,
            };
        };

        let g_new = central_gradient(&eval, &x_new);
        let s: Vec<f64> = x_new.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = g_new.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-14 {
            // H ← (I − ρ s yᵀ) H (I − ρ y sᵀ) + ρ s sᵀ
            let rho = 1.0 / sy;
            let hy: Vec<f64> = h.iter().map(|row| dot(row, &y)).collect();
            let yhy = dot(&y, &hy);
            for i in 0..n {
                for j in 0..n {
                    h[i][j] += -rho * (s[i] * hy[j] + hy[i] * s[j])
                        + (rho * rho * yhy + rho) * s[i] * s[j];
                }
            }
        }

        let decrease = fx - f_new;
        x = x_new;
        g = g_new;
        fx = f_new;
        if decrease.abs() <= opts.rel_tol * fx.abs().max(1.0) && max_abs(&g) < 1e-4 {
            return Minimum {
                x,
                value: fx,
                iterations: iter + 1,
                converged: true,
            };
        }
    }
    let converged = max_abs(&g) < opts.grad_tol;
    Minimum {
        x,
        value: fx,
        iterations: opts.max_iter,
        converged,
    }
}
