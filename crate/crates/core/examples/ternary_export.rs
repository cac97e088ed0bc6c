//! Ternary coordinates of working, sleep and leisure shares over a day.

use activity_trajectories::pipeline::synth::fixture_truth;
use activity_trajectories::stats::{ternary_coordinates, ternary_inverse};
use activity_trajectories::ActivityCategory::{C02, C05, C07};
use activity_trajectories::*;

fn main() -> Result<()> {
    let profile = analytic_profile(&fixture_truth().models[0]);
    let points = ternary_coordinates(profile.rows(), [C05, C02, C07])?;
    println!("step,x,y,c05,c02,c07");
    for (t, p) in points.iter().enumerate().step_by(12) {
        let [a, b, c] = p.shares;
        println!("{},{:.4},{:.4},{a:.4},{b:.4},{c:.4}", t + 1, p.x, p.y);
    }
    let back = ternary_inverse(points[0].x, points[0].y);
    println!("step 1 shares recovered from (x, y): {back:.4?}");
    Ok(())
}
