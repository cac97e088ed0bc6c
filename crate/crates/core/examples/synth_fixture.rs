//! Writes a five-community synthetic fixture to the directory given as argument.

use std::path::PathBuf;

use activity_trajectories::pipeline::{fixture_truth, generate_synthetic};
use activity_trajectories::Result;

fn main() -> Result<()> {
    let dir = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("fixture"));
    let files = generate_synthetic(&fixture_truth(), 1000, 2015, &dir)?;
    println!("diaries    {}", files.diaries.display());
    println!("covariates {}", files.covariates.display());
    println!("truth      {}", files.manifest.display());
    println!("config     {}", files.config.display());
    Ok(())
}
