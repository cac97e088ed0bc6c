//! BFGS ascent with Armijo backtracking.

use nalgebra::{DMatrix, DVector};

/// Stopping rules for [`bfgs_ascent`].
#[derive(Debug, Clone, Copy)]
pub struct AscentOptions {
    /// Stop when `|f_new - f| / max(|f|, 1)` drops below this.
    pub rel_tol: f64,
    /// Stop when the gradient max-norm drops below this.
    pub grad_tol: f64,
    pub max_iter: usize,
}

impl Default for AscentOptions {
    fn default() -> Self {
        AscentOptions { rel_tol: 1e-8, grad_tol: 1e-6, max_iter: 500 }
    }
}

#[derive(Debug, Clone)]
pub struct AscentOutcome {
    pub x: DVector<f64>,
    pub value: f64,
    pub grad: DVector<f64>,
    pub iterations: usize,
    pub converged: bool,
    /// Objective after each accepted step, starting with the initial value.
    pub trace: Vec<f64>,
}

const ARMIJO_C1: f64 = 1e-4;
const MIN_STEP: f64 = 1e-20;

/// Maximizes `f`, which returns the value and gradient, or `None` where the
/// objective is not defined (the line search then shrinks the step).
///
/// Returns `None` if `f` is undefined at `x0`.
pub fn bfgs_ascent<F>(x0: DVector<f64>, opts: &AscentOptions, mut f: F) -> Option<AscentOutcome>
where
    F: FnMut(&DVector<f64>) -> Option<(f64, DVector<f64>)>,
{
    let n = x0.len();
    let (mut fx, mut g) = f(&x0)?;
    let mut x = x0;
    let mut h = DMatrix::<f64>::identity(n, n);
    let mut scaled = false;
    let mut trace = vec![fx];
    let mut converged = g.amax() < opts.grad_tol;
    let mut iterations = 0;

    while !converged && iterations < opts.max_iter {
        iterations += 1;
        let mut d = &h * &g;
        let mut slope = g.dot(&d);
        if !(slope > 0.0) {
            h = DMatrix::identity(n, n);
            d = g.clone();
            slope = g.dot(&d);
        }
        // first step without curvature information: cap the move length
        let mut step = if scaled { 1.0 } else { (1.0 / d.amax()).min(1.0) };

        let accepted = loop {
            let trial = &x + &d * step;
            if let Some((ft, gt)) = f(&trial) {
                if ft.is_finite() && ft >= fx + ARMIJO_C1 * step * slope {
                    break Some((trial, ft, gt));
                }
            }
            step *= 0.5;
            if step < MIN_STEP {
                break None;
            }
        };
        let Some((x_new, f_new, g_new)) = accepted else {
            // no ascent possible along the search direction
            converged = g.amax() < opts.grad_tol;
            break;
        };

        let s = &x_new - &x;
        // gradient change of the minimized objective -f
        let y = &g - &g_new;
        let sy = s.dot(&y);
        if sy > 1e-12 * s.norm() * y.norm() {
            if !scaled {
                h *= sy / y.dot(&y);
                scaled = true;
            }
            let rho = 1.0 / sy;
            let hy = &h * &y;
            let yhy = y.dot(&hy);
            // H += (1 + ρ yᵀHy) ρ s sᵀ - ρ (H y sᵀ + s yᵀ H)
            h += (&s * s.transpose()) * ((1.0 + rho * yhy) * rho);
            h -= (&hy * s.transpose() + &s * hy.transpose()) * rho;
        }

        let rel_change = (f_new - fx).abs() / fx.abs().max(1.0);
        x = x_new;
        fx = f_new;
        g = g_new;
        trace.push(fx);
        converged = g.amax() < opts.grad_tol || rel_change < opts.rel_tol;
    }

    Some(AscentOutcome { x, value: fx, grad: g, iterations, converged, trace })
}
