//! Dirichlet regression in the common parametrization.
//!
//! Each category `d` has its own coefficient vector and a log link,
//! `alpha_{i,d} = exp(x_i · beta_d)`, where `x_i = (1, time², z-scored
//! covariates)`. Coefficients are fitted by maximum likelihood with BFGS
//! ascent, then polished with Newton steps on a finite-difference Hessian
//! of the analytic score. The same Hessian gives standard errors.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::activity::{ActivityCategory, CommunityCovariates, Composition, NCAT};
use crate::dirichlet::{check_interior, DirichletParams};
use crate::error::{Error, Result};
use crate::optim::{bfgs_ascent, AscentOptions};
use crate::special::{ln_gamma, psi};

/// Shape parameters above this during the line search count as overflow.
const ALPHA_CEILING: f64 = 1e12;

/// Regressors of one observation, excluding the implicit intercept.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignRow {
    pub time_sq: f64,
    /// Covariates, already standardized.
    pub covariates: Vec<f64>,
}

impl DesignRow {
    pub fn new(time_sq: f64, covariates: Vec<f64>) -> Self {
        DesignRow { time_sq, covariates }
    }

    /// Standardizes raw covariate values with `std`.
    pub fn from_raw(time_sq: f64, raw: &[f64], std: &Standardization) -> Result<Self> {
        Ok(DesignRow { time_sq, covariates: std.apply(raw)? })
    }

    /// Number of columns including the intercept.
    pub fn width(&self) -> usize {
        2 + self.covariates.len()
    }

    /// `(1, time_sq, covariates...)`.
    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        [1.0, self.time_sq].into_iter().chain(self.covariates.iter().copied())
    }
}

/// Per-covariate z-score parameters taken from training data.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Standardization {
    pub names: Vec<String>,
    pub means: Vec<f64>,
    pub sds: Vec<f64>,
}

impl Standardization {
    /// Mean and sample standard deviation of each column of `raw`.
    pub fn from_rows(names: &[String], raw: &[Vec<f64>]) -> Result<Self> {
        if raw.len() < 2 {
            return Err(Error::TooFewPoints { needed: 2, got: raw.len() });
        }
        let n = raw.len() as f64;
        let mut means = Vec::with_capacity(names.len());
        let mut sds = Vec::with_capacity(names.len());
        for (j, name) in names.iter().enumerate() {
            let mean = raw.iter().map(|r| r[j]).sum::<f64>() / n;
            let var = raw.iter().map(|r| (r[j] - mean).powi(2)).sum::<f64>() / (n - 1.0);
            let sd = var.sqrt();
            if !(sd.is_finite() && sd > 0.0) {
                return Err(Error::ZeroVariance(name.clone()));
            }
            means.push(mean);
            sds.push(sd);
        }
        Ok(Standardization { names: names.to_vec(), means, sds })
    }

    pub fn apply(&self, raw: &[f64]) -> Result<Vec<f64>> {
        if raw.len() != self.names.len() {
            return Err(Error::CovariateMismatch(format!(
                "expected {} covariates ({}), got {}",
                self.names.len(),
                self.names.join(", "),
                raw.len()
            )));
        }
        Ok(raw.iter().zip(self.means.iter().zip(&self.sds)).map(|(v, (m, s))| (v - m) / s).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitOptions {
    pub rel_tol: f64,
    pub grad_tol: f64,
    pub max_iter: usize,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions { rel_tol: 1e-8, grad_tol: 1e-6, max_iter: 500 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionFit {
    /// `beta[d][j]`: category `d`, column `j` of `(1, time², covariates...)`.
    pub beta: Vec<Vec<f64>>,
    /// Standard errors from the inverse observed information; `None` when the
    /// information matrix is not positive definite.
    pub std_errors: Vec<Vec<Option<f64>>>,
    /// Two-sided z-test p-values.
    pub p_values: Vec<Vec<Option<f64>>>,
    pub covariate_names: Vec<String>,
    pub standardization: Standardization,
    pub loglik: f64,
    pub aic: f64,
    pub bic: f64,
    pub n_obs: usize,
    pub n_params: usize,
    pub converged: bool,
    pub iterations: usize,
    /// Covariance of the flattened coefficients (`d * width + j`).
    #[serde(skip)]
    pub covariance: Option<DMatrix<f64>>,
    /// Log-likelihood after each accepted optimizer step.
    #[serde(skip)]
    pub trace: Vec<f64>,
}

impl RegressionFit {
    /// Columns per category, including the intercept.
    pub fn width(&self) -> usize {
        self.covariate_names.len() + 2
    }

    /// Row labels for reports: `Intercept`, `Time^2`, then covariate labels.
    pub fn regressor_labels(&self) -> Vec<String> {
        let mut out = vec!["Intercept".to_string(), "Time^2".to_string()];
        out.extend(self.covariate_names.iter().map(|n| CommunityCovariates::short_label(n).to_string()));
        out
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// Flattened design and log responses.
struct Problem {
    x: Vec<f64>,
    ln_y: Vec<Composition>,
    width: usize,
}

enum EvalError {
    Overflow(usize),
}

impl Problem {
    fn new(x: &[DesignRow], y: &[Composition]) -> Result<Self> {
        if x.is_empty() {
            return Err(Error::EmptyInput("no observations".into()));
        }
        if x.len() != y.len() {
            return Err(Error::InvalidInput(format!("{} design rows but {} responses", x.len(), y.len())));
        }
        let width = x[0].width();
        let mut flat = Vec::with_capacity(x.len() * width);
        for (i, row) in x.iter().enumerate() {
            if row.width() != width {
                return Err(Error::CovariateMismatch(format!(
                    "design row {i} has {} columns, expected {width}",
                    row.width()
                )));
            }
            if row.values().any(|v| !v.is_finite()) {
                return Err(Error::InvalidInput(format!("design row {i} has a non-finite entry")));
            }
            flat.extend(row.values());
        }
        let mut ln_y = Vec::with_capacity(y.len());
        for (i, row) in y.iter().enumerate() {
            check_interior(row).map_err(|_| Error::NonInteriorY { row: i })?;
            ln_y.push(row.map(f64::ln));
        }
        Ok(Problem { x: flat, ln_y, width })
    }

    fn n(&self) -> usize {
        self.ln_y.len()
    }

    fn n_params(&self) -> usize {
        NCAT * self.width
    }

    fn row(&self, i: usize) -> &[f64] {
        &self.x[i * self.width..(i + 1) * self.width]
    }

    fn alphas(&self, theta: &[f64], i: usize, ceiling: f64) -> std::result::Result<[f64; NCAT], EvalError> {
        let xi = self.row(i);
        let mut alpha = [0.0; NCAT];
        for (d, a) in alpha.iter_mut().enumerate() {
            let eta: f64 = xi.iter().zip(&theta[d * self.width..(d + 1) * self.width]).map(|(x, b)| x * b).sum();
            *a = eta.exp();
            if !(a.is_finite() && *a > 0.0 && *a <= ceiling) {
                return Err(EvalError::Overflow(i));
            }
        }
        Ok(alpha)
    }

    /// Log-likelihood and gradient, summed over observations in order.
    fn eval(&self, theta: &[f64], ceiling: f64) -> std::result::Result<(f64, Vec<f64>), EvalError> {
        let mut ll = 0.0;
        let mut grad = vec![0.0; self.n_params()];
        for i in 0..self.n() {
            let alpha = self.alphas(theta, i, ceiling)?;
            let a0: f64 = alpha.iter().sum();
            let psi0 = psi(a0);
            let ln_y = &self.ln_y[i];
            let mut li = ln_gamma(a0);
            let xi = self.row(i);
            for d in 0..NCAT {
                li += (alpha[d] - 1.0) * ln_y[d] - ln_gamma(alpha[d]);
                let w = alpha[d] * (psi0 - psi(alpha[d]) + ln_y[d]);
                for (g, x) in grad[d * self.width..(d + 1) * self.width].iter_mut().zip(xi) {
                    *g += w * x;
                }
            }
            ll += li;
        }
        Ok((ll, grad))
    }

    fn eval_dv(&self, theta: &DVector<f64>, ceiling: f64) -> Option<(f64, DVector<f64>)> {
        self.eval(theta.as_slice(), ceiling).ok().map(|(f, g)| (f, DVector::from_vec(g)))
    }

    /// Central differences of the analytic score, symmetrized.
    fn hessian(&self, theta: &DVector<f64>) -> Option<DMatrix<f64>> {
        let k = theta.len();
        let mut h = DMatrix::zeros(k, k);
        let mut probe = theta.clone();
        for j in 0..k {
            let step = 1e-5 * theta[j].abs().max(1.0);
            probe[j] = theta[j] + step;
            let (_, gp) = self.eval_dv(&probe, f64::INFINITY)?;
            probe[j] = theta[j] - step;
            let (_, gm) = self.eval_dv(&probe, f64::INFINITY)?;
            probe[j] = theta[j];
            h.set_column(j, &((gp - gm) / (2.0 * step)));
        }
        Some((&h + h.transpose()) * 0.5)
    }
}

fn theta_from_beta(beta: &[Vec<f64>], width: usize) -> Result<Vec<f64>> {
    if beta.len() != NCAT || beta.iter().any(|b| b.len() != width) {
        return Err(Error::CovariateMismatch(format!("coefficients must be {NCAT} x {width}")));
    }
    Ok(beta.iter().flatten().copied().collect())
}

fn beta_from_theta(theta: &[f64], width: usize) -> Vec<Vec<f64>> {
    theta.chunks(width).map(|c| c.to_vec()).collect()
}

/// Log-likelihood `Σ_i ln f(y_i | exp(x_i β))` and its gradient
/// `∂ℓ/∂β_{d,j} = Σ_i α_{i,d} x_{i,j} [ψ(α_{i,0}) − ψ(α_{i,d}) + ln y_{i,d}]`.
pub fn loglik_and_score(beta: &[Vec<f64>], x: &[DesignRow], y: &[Composition]) -> Result<(f64, Vec<Vec<f64>>)> {
    let problem = Problem::new(x, y)?;
    let theta = theta_from_beta(beta, problem.width)?;
    match problem.eval(&theta, f64::INFINITY) {
        Ok((ll, g)) => Ok((ll, beta_from_theta(&g, problem.width))),
        Err(EvalError::Overflow(row)) => Err(Error::NonFiniteAlpha { row }),
    }
}

/// Method-of-moments start: intercepts `ln(α0 · mean_d)` on pooled responses, slopes zero.
fn moment_start(y: &[Composition], width: usize) -> Vec<f64> {
    let n = y.len() as f64;
    let mut mean = [0.0; NCAT];
    for row in y {
        for (m, v) in mean.iter_mut().zip(row) {
            *m += v / n;
        }
    }
    let mut log_precision = 0.0;
    for d in 0..NCAT {
        let var = y.iter().map(|r| (r[d] - mean[d]).powi(2)).sum::<f64>() / n;
        let a0 = if var > 0.0 { mean[d] * (1.0 - mean[d]) / var - 1.0 } else { 1e6 };
        log_precision += a0.clamp(1e-2, 1e6).ln() / NCAT as f64;
    }
    let a0 = log_precision.exp();
    let mut theta = vec![0.0; NCAT * width];
    for d in 0..NCAT {
        theta[d * width] = (a0 * mean[d]).ln();
    }
    theta
}

/// Maximum-likelihood fit. `x` must already be standardized; attach the
/// standardization with [`RegressionFit::standardization`] if it is known.
///
/// A fit that stops without meeting the tolerances is returned with
/// `converged = false`.
pub fn fit_regression(
    x: &[DesignRow],
    y: &[Composition],
    covariate_names: &[String],
    options: &FitOptions,
) -> Result<RegressionFit> {
    let problem = Problem::new(x, y)?;
    let width = problem.width;
    if covariate_names.len() + 2 != width {
        return Err(Error::CovariateMismatch(format!(
            "{} covariate names for {} covariate columns",
            covariate_names.len(),
            width - 2
        )));
    }
    let n = problem.n();
    if n < width + 1 {
        return Err(Error::TooFewPoints { needed: width + 1, got: n });
    }
    let design = DMatrix::from_row_slice(n, width, &problem.x);
    let svd = design.svd(false, false);
    let smax = svd.singular_values.max();
    let rank = svd.singular_values.iter().filter(|s| **s > smax * 1e-10).count();
    if rank < width {
        return Err(Error::RankDeficientDesign { rank, cols: width });
    }

    let start = DVector::from_vec(moment_start(y, width));
    let ascent = AscentOptions { rel_tol: options.rel_tol, grad_tol: options.grad_tol, max_iter: options.max_iter };
    let outcome =
        bfgs_ascent(start, &ascent, |t| problem.eval_dv(t, ALPHA_CEILING)).ok_or(Error::NonFiniteAlpha { row: 0 })?;

    let mut theta = outcome.x;
    let mut ll = outcome.value;
    let mut grad = outcome.grad;
    let mut trace = outcome.trace;
    let mut iterations = outcome.iterations;

    // Newton polish on the numerical Hessian, only after BFGS has converged
    for _ in 0..if outcome.converged { 8 } else { 0 } {
        if grad.amax() < options.grad_tol * 1e-3 {
            break;
        }
        let Some(hess) = problem.hessian(&theta) else { break };
        let Some(chol) = (-hess).cholesky() else { break };
        let dir = chol.solve(&grad);
        let mut step = 1.0;
        let mut improved = None;
        while step > 1e-6 {
            let trial = &theta + &dir * step;
            if let Some((lt, gt)) = problem.eval_dv(&trial, ALPHA_CEILING) {
                if lt >= ll {
                    improved = Some((trial, lt, gt));
                    break;
                }
            }
            step *= 0.5;
        }
        let Some((t, l, g)) = improved else { break };
        let gain = l - ll;
        theta = t;
        ll = l;
        grad = g;
        trace.push(ll);
        iterations += 1;
        if gain == 0.0 {
            break;
        }
    }

    let converged = outcome.converged || grad.amax() < options.grad_tol;
    let covariance = problem.hessian(&theta).and_then(|h| (-h).cholesky()).map(|c| c.inverse());

    let k = problem.n_params();
    let mut std_errors = vec![vec![None; width]; NCAT];
    let mut p_values = vec![vec![None; width]; NCAT];
    if let Some(cov) = &covariance {
        for d in 0..NCAT {
            for j in 0..width {
                let idx = d * width + j;
                let var = cov[(idx, idx)];
                if var.is_finite() && var > 0.0 {
                    let se = var.sqrt();
                    std_errors[d][j] = Some(se);
                    p_values[d][j] = Some(two_sided_p(theta[idx] / se));
                }
            }
        }
    }

    let kf = k as f64;
    Ok(RegressionFit {
        beta: beta_from_theta(theta.as_slice(), width),
        std_errors,
        p_values,
        covariate_names: covariate_names.to_vec(),
        standardization: Standardization::default(),
        loglik: ll,
        aic: 2.0 * kf - 2.0 * ll,
        bic: kf * (n as f64).ln() - 2.0 * ll,
        n_obs: n,
        n_params: k,
        converged,
        iterations,
        covariance,
        trace,
    })
}

/// `2 (1 - Φ(|z|))`.
pub fn two_sided_p(z: f64) -> f64 {
    statrs::function::erf::erfc(z.abs() / std::f64::consts::SQRT_2)
}

/// Shape parameters and mean composition for one design row.
pub fn predict(fit: &RegressionFit, x: &DesignRow) -> Result<(DirichletParams, Composition)> {
    if x.covariates.len() != fit.covariate_names.len() {
        return Err(Error::CovariateMismatch(format!(
            "fit uses {} covariates ({}), row has {}",
            fit.covariate_names.len(),
            fit.covariate_names.join(", "),
            x.covariates.len()
        )));
    }
    let alpha: Vec<f64> =
        fit.beta.iter().map(|b| b.iter().zip(x.values()).map(|(b, v)| b * v).sum::<f64>().exp()).collect();
    let params = DirichletParams::new(alpha)?;
    let mean = params.mean();
    let mut comp = [0.0; NCAT];
    comp.copy_from_slice(&mean);
    Ok((params, comp))
}

/// Standardized residuals `(y − μ) / sqrt(Var)` per observation and category.
pub fn residuals(fit: &RegressionFit, x: &[DesignRow], y: &[Composition]) -> Result<Vec<Composition>> {
    if x.len() != y.len() {
        return Err(Error::InvalidInput(format!("{} design rows but {} responses", x.len(), y.len())));
    }
    x.iter()
        .zip(y)
        .map(|(xi, yi)| {
            let (params, mean) = predict(fit, xi)?;
            let var = params.variance();
            let mut r = [0.0; NCAT];
            for d in 0..NCAT {
                r[d] = (yi[d] - mean[d]) / var[d].sqrt();
            }
            Ok(r)
        })
        .collect()
}

/// Significance code for a p-value: `***` < 0.001, `**` < 0.01, `*` < 0.05.
pub fn significance_code(p: f64) -> &'static str {
    if p < 0.001 {
        "***"
    } else if p < 0.01 {
        "**"
    } else if p < 0.05 {
        "*"
    } else {
        ""
    }
}

pub const SIGNIFICANCE_LINE: &str = "Significance codes: 0 '***' 0.001 '**' 0.01 '*' 0.05";

/// Text table with one row per regressor and an Estimate/Pr column pair per
/// category. Pr shows the significance code, or the p-value when above 0.05.
pub fn coefficient_table(fit: &RegressionFit) -> String {
    use std::fmt::Write;
    let mut s = String::new();
    let _ = write!(s, "{:<12}", "");
    for c in ActivityCategory::ALL {
        let _ = write!(s, "{:>18}", c.code().to_uppercase());
    }
    s.push('\n');
    let _ = write!(s, "{:<12}", "");
    for _ in 0..NCAT {
        let _ = write!(s, "{:>10}{:>8}", "Estimate", "Pr");
    }
    s.push('\n');
    for (j, label) in fit.regressor_labels().iter().enumerate() {
        let _ = write!(s, "{label:<12}");
        for d in 0..NCAT {
            let pr = match fit.p_values[d][j] {
                Some(p) if p < 0.05 => significance_code(p).to_string(),
                Some(p) => format!("{p:.4}"),
                None => "NA".to_string(),
            };
            let _ = write!(s, "{:>10.4}{:>8}", fit.beta[d][j], pr);
        }
        s.push('\n');
    }
    let _ = writeln!(
        s,
        "AIC: {:.0}    BIC: {:.0}    Log-likelihood: {:.0}    n = {}    k = {}",
        fit.aic, fit.bic, fit.loglik, fit.n_obs, fit.n_params
    );
    s.push('\n');
    s.push_str(SIGNIFICANCE_LINE);
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform_y() -> Composition {
        [0.125; NCAT]
    }

    #[test]
    fn single_observation_uniform_density() {
        // intercept-only with β = 0 gives α = 1: density Γ(8) on the 7-simplex
        let x = vec![DesignRow::new(0.0, vec![])];
        let beta = vec![vec![0.0, 0.0]; NCAT];
        let (ll, _) = loglik_and_score(&beta, &x, &[[0.05, 0.2, 0.1, 0.1, 0.15, 0.1, 0.2, 0.1]]).unwrap();
        assert!((ll - 5040f64.ln()).abs() < 1e-12);
        assert!((ll - 8.525_161_361_065_415).abs() < 1e-9);
    }

    #[test]
    fn duplicated_observations_double_loglik() {
        let x = vec![DesignRow::new(0.3, vec![1.0]), DesignRow::new(0.9, vec![-0.5])];
        let y = vec![[0.05, 0.2, 0.1, 0.1, 0.15, 0.1, 0.2, 0.1], [0.1, 0.3, 0.05, 0.05, 0.2, 0.05, 0.15, 0.1]];
        let beta: Vec<Vec<f64>> = (0..NCAT).map(|d| vec![0.1 * d as f64, -0.2, 0.05]).collect();
        let (ll1, g1) = loglik_and_score(&beta, &x, &y).unwrap();
        let x2: Vec<_> = x.iter().chain(&x).cloned().collect();
        let y2: Vec<_> = y.iter().chain(&y).copied().collect();
        let (ll2, g2) = loglik_and_score(&beta, &x2, &y2).unwrap();
        assert_eq!(ll2, 2.0 * ll1);
        for (a, b) in g1.iter().flatten().zip(g2.iter().flatten()) {
            assert!((2.0 * a - b).abs() <= 1e-12 * b.abs().max(1.0));
        }
    }

    #[test]
    fn non_interior_y_rejected() {
        let x = vec![DesignRow::new(0.0, vec![])];
        let mut y = uniform_y();
        y[0] = 0.0;
        y[1] = 0.25;
        let beta = vec![vec![0.0, 0.0]; NCAT];
        assert!(matches!(loglik_and_score(&beta, &x, &[y]), Err(Error::NonInteriorY { row: 0 })));
    }

    #[test]
    fn overflow_reported() {
        let x = vec![DesignRow::new(0.0, vec![])];
        let mut beta = vec![vec![0.0, 0.0]; NCAT];
        beta[3][0] = 800.0;
        assert!(matches!(loglik_and_score(&beta, &x, &[uniform_y()]), Err(Error::NonFiniteAlpha { row: 0 })));
    }

    fn zero_fit(width: usize) -> RegressionFit {
        RegressionFit {
            beta: vec![vec![0.0; width]; NCAT],
            std_errors: vec![vec![None; width]; NCAT],
            p_values: vec![vec![None; width]; NCAT],
            covariate_names: (0..width - 2).map(|j| format!("v{j}")).collect(),
            standardization: Standardization::default(),
            loglik: 0.0,
            aic: 0.0,
            bic: 0.0,
            n_obs: 0,
            n_params: NCAT * width,
            converged: true,
            iterations: 0,
            covariance: None,
            trace: vec![],
        }
    }

    #[test]
    fn predict_zero_coefficients_uniform() {
        let fit = zero_fit(3);
        let (params, mean) = predict(&fit, &DesignRow::new(0.7, vec![1.3])).unwrap();
        assert!(params.alpha().iter().all(|a| *a == 1.0));
        assert!(mean.iter().all(|m| *m == 0.125));
    }

    #[test]
    fn predict_hand_evaluated() {
        let mut fit = zero_fit(3);
        fit.beta[1] = vec![0.5, 1.5, -0.25];
        fit.beta[4] = vec![-1.0, 0.0, 2.0];
        let x = DesignRow::new(0.36, vec![0.8]);
        let (params, _) = predict(&fit, &x).unwrap();
        assert!((params.alpha()[1] - (0.5 + 1.5 * 0.36 - 0.25 * 0.8f64).exp()).abs() < 1e-15);
        assert!((params.alpha()[4] - (-1.0 + 2.0 * 0.8f64).exp()).abs() < 1e-15);
        assert_eq!(params.alpha()[0], 1.0);
    }

    #[test]
    fn intercept_shift_leaves_mean_unchanged() {
        let mut fit = zero_fit(3);
        for (d, b) in fit.beta.iter_mut().enumerate() {
            *b = vec![0.1 * d as f64, -0.3, 0.2];
        }
        let x = DesignRow::new(0.5, vec![-1.0]);
        let (p1, m1) = predict(&fit, &x).unwrap();
        for b in fit.beta.iter_mut() {
            b[0] += 0.7;
        }
        let (p2, m2) = predict(&fit, &x).unwrap();
        for d in 0..NCAT {
            assert!((p2.alpha()[d] / p1.alpha()[d] - 0.7f64.exp()).abs() < 1e-12);
            assert!((m1[d] - m2[d]).abs() < 1e-15);
        }
        assert!((m1.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn predict_covariate_mismatch() {
        let fit = zero_fit(3);
        assert!(matches!(predict(&fit, &DesignRow::new(0.0, vec![])), Err(Error::CovariateMismatch(_))));
    }

    #[test]
    fn residual_centred_and_hand_case() {
        let fit = zero_fit(2);
        let r = residuals(&fit, &[DesignRow::new(0.0, vec![])], &[uniform_y()]).unwrap();
        assert!(r[0].iter().all(|v| v.abs() < 1e-15));
        // two-component reduction: α = (2, 2), Var = 0.05, y = (0.6, 0.4)
        let p = DirichletParams::new(vec![2.0, 2.0]).unwrap();
        let r1 = (0.6 - p.mean()[0]) / p.variance()[0].sqrt();
        assert!((r1 - 0.447_213_595_5).abs() < 1e-9);
    }

    #[test]
    fn significance_codes() {
        assert_eq!(significance_code(0.0005), "***");
        assert_eq!(significance_code(0.005), "**");
        assert_eq!(significance_code(0.02), "*");
        assert_eq!(significance_code(0.2), "");
        let p = two_sided_p(1.959_963_984_540_054);
        assert!((p - 0.05).abs() < 1e-9, "{p}");
    }

    #[test]
    fn rank_deficient_design_rejected() {
        let x: Vec<_> = (0..20).map(|i| DesignRow::new(i as f64, vec![2.0 * i as f64])).collect();
        let y = vec![uniform_y(); 20];
        let names = vec!["dup".to_string()];
        assert!(matches!(
            fit_regression(&x, &y, &names, &FitOptions::default()),
            Err(Error::RankDeficientDesign { rank: 2, cols: 3 })
        ));
    }

    #[test]
    fn standardization_round_trip() {
        let names = vec!["a".to_string(), "b".to_string()];
        let raw = vec![vec![1.0, 10.0], vec![2.0, 30.0], vec![3.0, 20.0]];
        let s = Standardization::from_rows(&names, &raw).unwrap();
        assert_eq!(s.means, vec![2.0, 20.0]);
        assert_eq!(s.apply(&[2.0, 20.0]).unwrap(), vec![0.0, 0.0]);
        assert_eq!(s.apply(&[3.0, 30.0]).unwrap(), vec![1.0, 1.0]);
        let flat = vec![vec![1.0, 5.0], vec![2.0, 5.0]];
        assert!(matches!(Standardization::from_rows(&names, &flat), Err(Error::ZeroVariance(n)) if n == "b"));
    }
}
