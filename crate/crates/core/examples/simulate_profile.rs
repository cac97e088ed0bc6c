//! Simulated and exact community profiles side by side.

use activity_trajectories::pipeline::synth::fixture_truth;
use activity_trajectories::*;

fn main() -> Result<()> {
    let model = &fixture_truth().models[2];
    let simulated = simulate_profile(model, 10_000, 42)?;
    let exact = analytic_profile(model);
    println!("step  sleep(sim) sleep(exact)  work(sim) work(exact)");
    for t in (1..=STEPS).step_by(8) {
        let (s, e) = (simulated.step(t), exact.step(t));
        let (sleep, work) = (ActivityCategory::C02.index(), ActivityCategory::C05.index());
        println!("{t:>4}  {:>10.4} {:>12.4} {:>10.4} {:>11.4}", s[sleep], e[sleep], s[work], e[work]);
    }
    Ok(())
}
