//! Estimates a time-inhomogeneous transition model from synthetic diaries.

use activity_trajectories::pipeline::synth::{fixture_truth, sample_diaries};
use activity_trajectories::*;

fn main() -> Result<()> {
    let truth = fixture_truth();
    let diaries = sample_diaries(&truth, 2000, 1);
    let model = estimate_transitions(&diaries[0], 0.5)?;
    let exact = &truth.models[0];
    let worst = model
        .matrices()
        .iter()
        .zip(exact.matrices())
        .flat_map(|(a, b)| a.iter().flatten().zip(b.iter().flatten()).map(|(x, y)| (x - y).abs()))
        .fold(0.0, f64::max);
    println!("initial distribution {:.3?}", model.initial());
    println!("largest transition error against the generating model: {worst:.3}");
    println!("step 1 -> 2 sleep row: {:.3?}", model.transition(1)[ActivityCategory::C02.index()]);
    Ok(())
}
