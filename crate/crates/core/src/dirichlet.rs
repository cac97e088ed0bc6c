//! Dirichlet distribution on the simplex.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::ln_gamma;

/// Shape parameters `alpha` with precision `alpha0 = Σ alpha`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirichletParams {
    alpha: Vec<f64>,
    alpha0: f64,
}

impl DirichletParams {
    pub fn new(alpha: Vec<f64>) -> Result<Self> {
        if alpha.len() < 2 {
            return Err(Error::InvalidAlpha(format!("need at least 2 components, got {}", alpha.len())));
        }
        if let Some(a) = alpha.iter().find(|a| !(a.is_finite() && **a > 0.0)) {
            return Err(Error::InvalidAlpha(format!("shape parameter {a} is not a positive finite number")));
        }
        let alpha0 = alpha.iter().sum();
        Ok(DirichletParams { alpha, alpha0 })
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn alpha0(&self) -> f64 {
        self.alpha0
    }

    pub fn dim(&self) -> usize {
        self.alpha.len()
    }

    /// `E[y] = alpha / alpha0`.
    pub fn mean(&self) -> Vec<f64> {
        self.alpha.iter().map(|a| a / self.alpha0).collect()
    }

    /// Per-component variance `alpha_d (alpha0 - alpha_d) / (alpha0^2 (alpha0 + 1))`.
    pub fn variance(&self) -> Vec<f64> {
        let a0 = self.alpha0;
        self.alpha.iter().map(|a| a * (a0 - a) / (a0 * a0 * (a0 + 1.0))).collect()
    }

    /// `ln B(alpha) = Σ ln Γ(alpha_d) - ln Γ(alpha0)`.
    pub fn ln_beta(&self) -> f64 {
        self.alpha.iter().map(|&a| ln_gamma(a)).sum::<f64>() - ln_gamma(self.alpha0)
    }
}

/// Mean composition of `params`.
pub fn dirichlet_mean(params: &DirichletParams) -> Vec<f64> {
    params.mean()
}

/// Checks that `y` lies strictly inside the simplex.
pub fn check_interior(y: &[f64]) -> Result<()> {
    if let Some(v) = y.iter().find(|v| !(**v > 0.0 && **v < 1.0)) {
        return Err(Error::OutsideSimplex(format!("component {v} not in (0, 1)")));
    }
    let sum: f64 = y.iter().sum();
    if (sum - 1.0).abs() > crate::activity::ROW_SUM_TOL {
        return Err(Error::OutsideSimplex(format!("components sum to {sum}")));
    }
    Ok(())
}

/// `ln f(y | alpha) = ln Γ(alpha0) - Σ ln Γ(alpha_d) + Σ (alpha_d - 1) ln y_d`.
pub fn dirichlet_log_density(y: &[f64], params: &DirichletParams) -> Result<f64> {
    if y.len() != params.dim() {
        return Err(Error::OutsideSimplex(format!(
            "composition has {} components, parameters have {}",
            y.len(),
            params.dim()
        )));
    }
    check_interior(y)?;
    let kernel: f64 = y.iter().zip(&params.alpha).map(|(y, a)| (a - 1.0) * y.ln()).sum();
    Ok(kernel - params.ln_beta())
}
