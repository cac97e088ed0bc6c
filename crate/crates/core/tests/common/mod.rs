//! Shared generators for the integration tests.
#![allow(dead_code)]

use activity_trajectories::markov::Matrix8;
use activity_trajectories::*;
use rand::Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};

/// Design rows with `time_sq` on [0, 1] and `n_cov` standard-normal
/// covariates, plus a coefficient matrix giving concentrations of order 1 to 20.
pub fn random_design<R: Rng>(rng: &mut R, n: usize, n_cov: usize) -> (Vec<DesignRow>, Vec<Vec<f64>>) {
    let x = (0..n)
        .map(|_| {
            let t: f64 = rng.random();
            DesignRow::new(t * t, (0..n_cov).map(|_| rng.sample(StandardNormal)).collect())
        })
        .collect();
    let beta = (0..NCAT)
        .map(|_| {
            let mut b = vec![rng.random_range(0.5..2.0), rng.random_range(-0.5..0.5)];
            b.extend((0..n_cov).map(|_| rng.random_range(-0.3..0.3)));
            b
        })
        .collect();
    (x, beta)
}

/// One draw from `Dirichlet(exp(x β))` via normalized gamma variates.
pub fn dirichlet_sample<R: Rng>(rng: &mut R, beta: &[Vec<f64>], x: &DesignRow) -> Composition {
    let mut y = [0.0; NCAT];
    for (d, b) in beta.iter().enumerate() {
        let eta: f64 = x.values().zip(b).map(|(v, c)| v * c).sum();
        y[d] = Gamma::new(eta.exp(), 1.0).unwrap().sample(rng).max(1e-300);
    }
    let s: f64 = y.iter().sum();
    y.map(|v| v / s)
}

fn random_row<R: Rng>(rng: &mut R) -> Composition {
    let mut row = [0.0; NCAT];
    for v in &mut row {
        *v = rng.random_range(0.01..1.0);
    }
    let s: f64 = row.iter().sum();
    row.map(|v| v / s)
}

/// Model with independent uniform-then-normalized rows.
pub fn random_model<R: Rng>(rng: &mut R) -> TransitionModel {
    let initial = random_row(rng);
    let matrices: Vec<Matrix8> = (0..STEPS - 1)
        .map(|_| {
            let mut m = [[0.0; NCAT]; NCAT];
            for row in &mut m {
                *row = random_row(rng);
            }
            m
        })
        .collect();
    TransitionModel::new(initial, matrices, 0.0).unwrap()
}

/// `aic = 2k − 2ℓ` exactly and `bic − aic = k (ln n − 2)` to rounding.
pub fn information_identities_hold(fit: &RegressionFit) -> bool {
    let k = fit.n_params as f64;
    let n = fit.n_obs as f64;
    let gap = k * (n.ln() - 2.0);
    fit.aic == 2.0 * k - 2.0 * fit.loglik && ((fit.bic - fit.aic) - gap).abs() <= 1e-9 * gap.abs().max(1.0)
}
