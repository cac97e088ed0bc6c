//! Groups diaries by their home / sleep / out pattern with k-means.

use activity_trajectories::pipeline::synth::{fixture_truth, sample_diaries};
use activity_trajectories::stats::{encode_diary, kmeans, ReductionMap};
use activity_trajectories::*;

fn main() -> Result<()> {
    let diaries = sample_diaries(&fixture_truth(), 500, 3);
    let map = ReductionMap::default();
    let points = diaries[1].iter().map(|d| encode_diary(d, &map)).collect::<Result<Vec<_>>>()?;
    let fit = kmeans(&points, 3, 3, 10)?;
    println!("best restart {} with inertia {:.1}", fit.restart, fit.inertia);
    for (k, (share, centroid)) in fit.shares.iter().zip(&fit.centroids).enumerate() {
        // Features interleave home-active, sleep, out per step; four steps per hour.
        let hours = |state: usize| centroid.iter().skip(state).step_by(3).sum::<f64>() / 4.0;
        println!(
            "cluster {}: {:.1}% of diaries, {:.1} h home, {:.1} h asleep, {:.1} h out",
            k + 1,
            100.0 * share,
            hours(0),
            hours(1),
            hours(2)
        );
    }
    Ok(())
}
