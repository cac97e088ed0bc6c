//! Fits a Dirichlet regression to data drawn from known coefficients.

use activity_trajectories::regression::coefficient_table;
use activity_trajectories::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};

fn main() -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let beta: Vec<Vec<f64>> = (0..NCAT).map(|d| vec![1.0 + 0.1 * d as f64, 0.5 - 0.15 * d as f64, 0.2]).collect();
    let mut x = Vec::new();
    let mut y = Vec::new();
    for _ in 0..400 {
        let s: f64 = rng.random_range(-1.0..1.0);
        let row = DesignRow::new(s * s, vec![rng.sample(StandardNormal)]);
        let mut draw = [0.0; NCAT];
        for (d, b) in beta.iter().enumerate() {
            let eta: f64 = row.values().zip(b).map(|(v, c)| v * c).sum();
            draw[d] = Gamma::new(eta.exp(), 1.0).expect("positive shape").sample(&mut rng);
        }
        let total: f64 = draw.iter().sum();
        x.push(row);
        y.push(draw.map(|v| v / total));
    }
    let fit = fit_regression(&x, &y, &["income".to_string()], &FitOptions::default())?;
    println!("{}", coefficient_table(&fit));
    let (_, mean) = predict(&fit, &x[0])?;
    println!("predicted mean composition for row 1: {mean:.3?}");
    Ok(())
}
