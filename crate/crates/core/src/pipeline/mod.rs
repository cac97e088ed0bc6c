//! End-to-end pipeline: configuration, ingestion, dataset assembly,
//! synthetic fixtures and the staged run.

pub mod config;
pub mod dataset;
pub mod ingest;
pub mod run;
pub mod synth;

use std::path::Path;

use crate::error::{Error, Result};

pub use config::PipelineConfig;
pub use dataset::{build_dataset, split_train_test, Dataset, Split};
pub use ingest::{ingest, IngestedData};
pub use run::{run_all, run_through, RunOutput, RunReport};
pub use synth::{fixture_truth, generate_synthetic, SyntheticTruth, TruthManifest};

/// Writes `bytes` to a sibling temp file, then renames it over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = std::path::PathBuf::from(tmp);
    std::fs::write(&tmp, bytes).map_err(|e| Error::io(&tmp, e))?;
    std::fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}
