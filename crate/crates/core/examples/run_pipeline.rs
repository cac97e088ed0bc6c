//! Generates a small fixture in a temporary directory and runs every stage.

use activity_trajectories::pipeline::{fixture_truth, generate_synthetic, run_all, PipelineConfig};
use activity_trajectories::Result;

fn main() -> Result<()> {
    let dir = std::env::temp_dir().join("actraj-example");
    let files = generate_synthetic(&fixture_truth(), 300, 11, &dir)?;
    let (config, hash) = PipelineConfig::load(&files.config)?;
    let report = run_all(&config, &hash)?;
    println!("kept {:?}, dropped {:?}", report.kept_variables, report.dropped_variables);
    println!(
        "fit on {} rows: loglik {:.1}, AIC {:.1}, BIC {:.1}",
        report.fit.n_obs, report.fit.loglik, report.fit.aic, report.fit.bic
    );
    println!("Box's M p = {:.4}", report.test_report.boxm.p);
    if let Some(r) = &report.recovery {
        println!("{}/{} truth contrasts within 3 standard errors", r.within, r.total);
    }
    println!("{} artifacts in {}", report.artifacts.len(), config.paths.output.display());
    Ok(())
}
