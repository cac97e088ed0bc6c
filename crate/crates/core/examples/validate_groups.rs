//! Compares two community trajectories with Box's M and per-category t-tests.

use activity_trajectories::pipeline::synth::fixture_truth;
use activity_trajectories::stats::validate_trajectories;
use activity_trajectories::*;

fn main() -> Result<()> {
    let truth = fixture_truth();
    let a = analytic_profile(&truth.models[0]);
    let b = simulate_profile(&truth.models[0], 2_000, 9)?;
    let report = validate_trajectories(a.rows(), b.rows())?;
    let m = &report.boxm;
    println!("Box's M = {:.2}, chi2 = {:.2}, df = {}, p = {:.4}", m.m, m.chi2, m.df, m.p);
    for t in &report.ttests {
        println!("{}: t = {:>7.3}, df = {:>6.1}, p = {:.4}", t.category, t.t, t.df, t.p);
    }
    Ok(())
}
