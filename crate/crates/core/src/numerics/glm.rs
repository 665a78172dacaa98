//! Ridge-penalized binomial regression (logit link) fitted by IRLS.
//!
//! The model is `logit(p_i) = intercept + x_i . beta`. The penalty
//! `ridge / 2 * |beta|^2` applies to the slopes only. Each IRLS step is a
//! full Newton step on the penalized log-likelihood, halved until the
//! objective does not decrease.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_RIDGE: f64 = 1e-6;

#[derive(Debug, Clone, Copy)]
pub enum Outcomes<'a> {
    /// One Bernoulli outcome (0 or 1) per observation.
    Binary(&'a [f64]),
    /// `successes` out of `trials` per observation.
    Counts { successes: &'a [f64], trials: &'a [f64] },
}

impl Outcomes<'_> {
    fn len(&self) -> usize {
        match self {
            Outcomes::Binary(y) => y.len(),
            Outcomes::Counts { successes, .. } => successes.len(),
        }
    }

    fn get(&self, i: usize) -> (f64, f64) {
        match self {
            Outcomes::Binary(y) => (y[i], 1.0),
            Outcomes::Counts { successes, trials } => (successes[i], trials[i]),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    pub ridge: f64,
    pub max_iterations: usize,
    /// Stop once the largest absolute coefficient change falls below this.
    pub tolerance: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            ridge: DEFAULT_RIDGE,
            max_iterations: 100,
            tolerance: 1e-8,
        }
    }
}

impl FitOptions {
    pub fn with_ridge(ridge: f64) -> Self {
        FitOptions {
            ridge,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub coefficients: Vec<f64>,
    pub intercept: f64,
    pub converged: bool,
    pub iterations: usize,
    /// Weighted binomial log-likelihood at the solution, without the
    /// binomial-coefficient constant and without the penalty.
    pub log_likelihood: f64,
}

fn softplus(eta: f64) -> f64 {
    if eta > 0.0 {
        eta + (-eta).exp().ln_1p()
    } else {
        eta.exp().ln_1p()
    }
}

fn logistic(eta: f64) -> f64 {
    if eta >= 0.0 {
        1.0 / (1.0 + (-eta).exp())
    } else {
        let e = eta.exp();
        e / (1.0 + e)
    }
}

struct Problem<'a, R> {
    rows: &'a [R],
    outcomes: Outcomes<'a>,
    weights: Option<&'a [f64]>,
    ridge: f64,
    p: usize,
}

impl<'a, R: AsRef<[f64]>> Problem<'a, R> {
    fn new(rows: &'a [R], outcomes: Outcomes<'a>, weights: Option<&'a [f64]>, ridge: f64) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::TooFewValues { required: 1, found: 0 });
        }
        if outcomes.len() != n {
            return Err(Error::LengthMismatch {
                left: n,
                right: outcomes.len(),
            });
        }
        if let Outcomes::Counts { trials, .. } = outcomes {
            if trials.len() != n {
                return Err(Error::LengthMismatch { left: n, right: trials.len() });
            }
        }
        if let Some(w) = weights {
            if w.len() != n {
                return Err(Error::LengthMismatch { left: n, right: w.len() });
            }
            if w.iter().any(|v| !v.is_finite() || *v < 0.0) {
                return Err(Error::InvalidInput("weights must be finite and nonnegative".into()));
            }
        }
        if !(ridge >= 0.0 && ridge.is_finite()) {
            return Err(Error::InvalidInput(format!("ridge must be nonnegative, got {ridge}")));
        }
        let p = rows[0].as_ref().len();
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != p {
                return Err(Error::LengthMismatch { left: p, right: r.len() });
            }
            if r.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidInput(format!("observation {i} has a non-finite feature")));
            }
            let (y, t) = outcomes.get(i);
            let ok = match outcomes {
                Outcomes::Binary(_) => y == 0.0 || y == 1.0,
                Outcomes::Counts { .. } => t.is_finite() && y.is_finite() && y >= 0.0 && t >= y,
            };
            if !ok {
                return Err(Error::InvalidInput(format!(
                    "observation {i}: outcome {y} out of {t} trials is invalid"
                )));
            }
        }
        Ok(Problem {
            rows,
            outcomes,
            weights,
            ridge,
            p,
        })
    }

    fn weight(&self, i: usize) -> f64 {
        self.weights.map_or(1.0, |w| w[i])
    }

    fn eta(&self, i: usize, beta: &[f64]) -> f64 {
        beta[0] + super::dot(self.rows[i].as_ref(), &beta[1..])
    }

    fn log_likelihood(&self, beta: &[f64]) -> f64 {
        (0..self.rows.len())
            .map(|i| {
                let w = self.weight(i);
                if w == 0.0 {
                    return 0.0;
                }
                let (y, t) = self.outcomes.get(i);
                let eta = self.eta(i, beta);
                w * (y * eta - t * softplus(eta))
            })
            .sum()
    }

    fn penalty(&self, beta: &[f64]) -> f64 {
        0.5 * self.ridge * beta[1..].iter().map(|b| b * b).sum::<f64>()
    }

    fn gradient(&self, beta: &[f64]) -> Vec<f64> {
        let mut g = vec![0.0; self.p + 1];
        for i in 0..self.rows.len() {
            let w = self.weight(i);
            if w == 0.0 {
                continue;
            }
            let (y, t) = self.outcomes.get(i);
            let r = w * (y - t * logistic(self.eta(i, beta)));
            g[0] += r;
            for (gk, x) in g[1..].iter_mut().zip(self.rows[i].as_ref()) {
                *gk += r * x;
            }
        }
        for (gk, b) in g[1..].iter_mut().zip(&beta[1..]) {
            *gk -= self.ridge * b;
        }
        g
    }

    // Negative Hessian of the penalized objective, (p+1) x (p+1) row-major.
    fn information(&self, beta: &[f64]) -> Vec<f64> {
        let k = self.p + 1;
        let mut h = vec![0.0; k * k];
        let mut xt = vec![1.0; k];
        for i in 0..self.rows.len() {
            let w = self.weight(i);
            if w == 0.0 {
                continue;
            }
            let (_, t) = self.outcomes.get(i);
            let mu = logistic(self.eta(i, beta));
            let wi = w * t * mu * (1.0 - mu);
            xt[1..].copy_from_slice(self.rows[i].as_ref());
            for a in 0..k {
                let s = wi * xt[a];
                for b in a..k {
                    h[a * k + b] += s * xt[b];
                }
            }
        }
        for a in 1..k {
            h[a * k + a] += self.ridge;
        }
        for a in 0..k {
            for b in 0..a {
                h[a * k + b] = h[b * k + a];
            }
        }
        h
    }
}

// Solves h x = g for symmetric positive definite h; None when a pivot
// collapses relative to its diagonal.
fn cholesky_solve(h: &[f64], g: &[f64]) -> Option<Vec<f64>> {
    let k = g.len();
    let mut l = vec![0.0; k * k];
    for i in 0..k {
        for j in 0..=i {
            let s: f64 = (0..j).map(|m| l[i * k + m] * l[j * k + m]).sum();
            if i == j {
                let pivot = h[i * k + i] - s;
                if !pivot.is_finite() || pivot <= 1e-12 * h[i * k + i].abs() || pivot <= 0.0 {
                    return None;
                }
                l[i * k + i] = pivot.sqrt();
            } else {
                l[i * k + j] = (h[i * k + j] - s) / l[j * k + j];
            }
        }
    }
    let mut y = vec![0.0; k];
    for i in 0..k {
        let s: f64 = (0..i).map(|m| l[i * k + m] * y[m]).sum();
        y[i] = (g[i] - s) / l[i * k + i];
    }
    let mut x = vec![0.0; k];
    for i in (0..k).rev() {
        let s: f64 = (i + 1..k).map(|m| l[m * k + i] * x[m]).sum();
        x[i] = (y[i] - s) / l[i * k + i];
    }
    Some(x)
}

/// Fits a ridge-penalized logistic/binomial regression with an unpenalized
/// intercept. Non-convergence, including divergence under separation, is
/// reported through `converged`; a singular starting system is an error.
pub fn fit_binomial<R: AsRef<[f64]>>(
    features: &[R],
    outcomes: Outcomes<'_>,
    weights: Option<&[f64]>,
    options: FitOptions,
) -> Result<FitResult> {
    let problem = Problem::new(features, outcomes, weights, options.ridge)?;
    let k = problem.p + 1;

    let (mut ys, mut ts) = (0.0, 0.0);
    for i in 0..features.len() {
        let w = problem.weight(i);
        let (y, t) = outcomes.get(i);
        ys += w * y;
        ts += w * t;
    }
    let mut beta = vec![0.0; k];
    if ts > 0.0 {
        let rate = (ys / ts).clamp(1e-3, 1.0 - 1e-3);
        beta[0] = (rate / (1.0 - rate)).ln();
    }

    let mut objective = problem.log_likelihood(&beta) - problem.penalty(&beta);
    let mut converged = false;
    let mut iterations = 0;
    while iterations < options.max_iterations {
        iterations += 1;
        let g = problem.gradient(&beta);
        let h = problem.information(&beta);
        let Some(step) = cholesky_solve(&h, &g) else {
            // after the first step a collapsing system means fitted
            // probabilities have saturated, so the estimate is diverging
            if iterations == 1 {
                return Err(Error::Singular { ridge: options.ridge });
            }
            log::warn!("binomial fit stopped after {iterations} iterations: fitted probabilities saturated");
            break;
        };

        let mut scale = 1.0;
        let mut candidate = beta.clone();
        for _ in 0..40 {
            for ((c, b), s) in candidate.iter_mut().zip(&beta).zip(&step) {
                *c = b + scale * s;
            }
            let next = problem.log_likelihood(&candidate) - problem.penalty(&candidate);
            if next >= objective - 1e-12 * objective.abs() {
                objective = next;
                break;
            }
            scale *= 0.5;
        }
        let change = candidate
            .iter()
            .zip(&beta)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        beta = candidate;
        if change < options.tolerance {
            converged = true;
            break;
        }
    }

    let converged = converged && beta.iter().all(|b| b.is_finite());
    Ok(FitResult {
        intercept: beta[0],
        coefficients: beta[1..].to_vec(),
        converged,
        iterations,
        log_likelihood: problem.log_likelihood(&beta),
    })
}

/// Penalized log-likelihood at `(intercept, coefficients)`.
pub fn penalized_log_likelihood<R: AsRef<[f64]>>(
    features: &[R],
    outcomes: Outcomes<'_>,
    weights: Option<&[f64]>,
    ridge: f64,
    intercept: f64,
    coefficients: &[f64],
) -> Result<f64> {
    let problem = Problem::new(features, outcomes, weights, ridge)?;
    let beta = stack(intercept, coefficients);
    Ok(problem.log_likelihood(&beta) - problem.penalty(&beta))
}

/// Analytic gradient of [`penalized_log_likelihood`]; the intercept
/// component comes first.
pub fn penalized_gradient<R: AsRef<[f64]>>(
    features: &[R],
    outcomes: Outcomes<'_>,
    weights: Option<&[f64]>,
    ridge: f64,
    intercept: f64,
    coefficients: &[f64],
) -> Result<Vec<f64>> {
    let problem = Problem::new(features, outcomes, weights, ridge)?;
    Ok(problem.gradient(&stack(intercept, coefficients)))
}

fn stack(intercept: f64, coefficients: &[f64]) -> Vec<f64> {
    std::iter::once(intercept).chain(coefficients.iter().copied()).collect()
}
