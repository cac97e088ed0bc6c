//! TOML run configuration. Unknown keys are rejected; relative paths resolve
//! against the directory holding the config file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::activity::{ActivityCategory, CategoryMapping, CommunityCovariates, TimeGrid};
use crate::error::{Error, Result};
use crate::markov::{default_epsilon, DEFAULT_KAPPA};
use crate::regression::FitOptions;
use crate::stats::kmeans::{DayState, ReductionMap};
use crate::stats::select::TIME_SQ;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    pub paths: Paths,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub markov: MarkovConfig,
    #[serde(default)]
    pub zero_replace: ZeroReplaceConfig,
    #[serde(default)]
    pub regression: RegressionConfig,
    #[serde(default)]
    pub clustering: ClusteringConfig,
    #[serde(default)]
    pub export: ExportConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Paths {
    pub diaries: PathBuf,
    pub covariates: PathBuf,
    /// `"default"`, `"identity"` or a CSV path with `raw_code,category` rows.
    #[serde(default = "default_mapping")]
    pub mapping: String,
    /// Truth manifest written by the fixture generator, enabling the recovery check.
    #[serde(default)]
    pub truth_manifest: Option<PathBuf>,
    #[serde(default = "default_output")]
    pub output: PathBuf,
}

fn default_mapping() -> String {
    "default".into()
}

fn default_output() -> PathBuf {
    PathBuf::from("out")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    pub steps: usize,
    pub slot_minutes: u32,
}

impl Default for GridConfig {
    fn default() -> Self {
        let g = TimeGrid::default();
        GridConfig { steps: g.steps, slot_minutes: g.slot_minutes }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MarkovConfig {
    pub kappa: f64,
    pub n_sim: usize,
    pub seed: u64,
}

impl Default for MarkovConfig {
    fn default() -> Self {
        MarkovConfig { kappa: DEFAULT_KAPPA, n_sim: 10_000, seed: 20_150_101 }
    }
}

/// `"auto"` or a number in `(0, 1/16)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Epsilon {
    Value(f64),
    Word(AutoWord),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AutoWord {
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ZeroReplaceConfig {
    pub epsilon: Epsilon,
}

impl Default for ZeroReplaceConfig {
    fn default() -> Self {
        ZeroReplaceConfig { epsilon: Epsilon::Word(AutoWord::Auto) }
    }
}

impl ZeroReplaceConfig {
    pub fn resolve(&self, n_sim: usize) -> f64 {
        match self.epsilon {
            Epsilon::Value(v) => v,
            Epsilon::Word(AutoWord::Auto) => default_epsilon(n_sim.max(1)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RegressionConfig {
    pub rel_tol: f64,
    pub grad_tol: f64,
    pub max_iter: usize,
    /// Covariate fields entering selection, in tie-break order.
    pub candidates: Vec<String>,
    /// Never dropped by selection. `time_sq` is always kept.
    pub fixed: Vec<String>,
    pub correlation_threshold: f64,
    pub split_fraction: f64,
    pub split_seed: u64,
}

impl Default for RegressionConfig {
    fn default() -> Self {
        let f = FitOptions::default();
        RegressionConfig {
            rel_tol: f.rel_tol,
            grad_tol: f.grad_tol,
            max_iter: f.max_iter,
            candidates: ["diversity", "racial_segregation", "median_age", "transportation", "residential"]
                .map(String::from)
                .to_vec(),
            fixed: vec![TIME_SQ.to_string()],
            correlation_threshold: 0.75,
            split_fraction: 0.8,
            split_seed: 2019,
        }
    }
}

impl RegressionConfig {
    pub fn fit_options(&self) -> FitOptions {
        FitOptions { rel_tol: self.rel_tol, grad_tol: self.grad_tol, max_iter: self.max_iter }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ClusteringConfig {
    pub k: usize,
    pub restarts: usize,
    pub seed: u64,
    pub reduction: BTreeMap<ActivityCategory, DayState>,
}

impl Default for ClusteringConfig {
    fn default() -> Self {
        ClusteringConfig { k: 3, restarts: 10, seed: 3, reduction: ReductionMap::default().entries().collect() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExportConfig {
    /// Categories at the three ternary vertices.
    pub ternary: [ActivityCategory; 3],
}

impl Default for ExportConfig {
    fn default() -> Self {
        ExportConfig { ternary: [ActivityCategory::C05, ActivityCategory::C02, ActivityCategory::C07] }
    }
}

impl PipelineConfig {
    /// Configuration with default settings for the given inputs.
    pub fn new(diaries: impl Into<PathBuf>, covariates: impl Into<PathBuf>, output: impl Into<PathBuf>) -> Self {
        PipelineConfig {
            paths: Paths {
                diaries: diaries.into(),
                covariates: covariates.into(),
                mapping: default_mapping(),
                truth_manifest: None,
                output: output.into(),
            },
            grid: GridConfig::default(),
            markov: MarkovConfig::default(),
            zero_replace: ZeroReplaceConfig::default(),
            regression: RegressionConfig::default(),
            clustering: ClusteringConfig::default(),
            export: ExportConfig::default(),
        }
    }

    /// Parses and validates TOML text; relative paths are joined onto `base`.
    pub fn from_toml(text: &str, base: &Path) -> Result<Self> {
        let mut cfg: PipelineConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let join = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        join(&mut cfg.paths.diaries);
        join(&mut cfg.paths.covariates);
        join(&mut cfg.paths.output);
        if let Some(t) = cfg.paths.truth_manifest.as_mut() {
            join(t);
        }
        if !matches!(cfg.paths.mapping.as_str(), "default" | "identity") && Path::new(&cfg.paths.mapping).is_relative()
        {
            cfg.paths.mapping = base.join(&cfg.paths.mapping).to_string_lossy().into_owned();
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads a config file. Returns the config and the SHA-256 of its bytes.
    pub fn load(path: &Path) -> Result<(Self, String)> {
        let bytes = std::fs::read(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        let text = String::from_utf8(bytes.clone()).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        let cfg = Self::from_toml(&text, base)?;
        Ok((cfg, hex::encode(Sha256::digest(&bytes))))
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    /// Replaces every seed with `seed`.
    pub fn override_seed(&mut self, seed: u64) {
        self.markov.seed = seed;
        self.regression.split_seed = seed;
        self.clustering.seed = seed;
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        TimeGrid::new(self.grid.steps, self.grid.slot_minutes)?;
        let r = &self.regression;
        if !(r.split_fraction > 0.0 && r.split_fraction < 1.0) {
            return bad(format!("split_fraction {} outside (0, 1)", r.split_fraction));
        }
        if !(r.correlation_threshold > 0.0 && r.correlation_threshold < 1.0) {
            return bad(format!("correlation_threshold {} outside (0, 1)", r.correlation_threshold));
        }
        if !(r.rel_tol > 0.0 && r.grad_tol > 0.0) || r.max_iter == 0 {
            return bad("tolerances and max_iter must be positive".into());
        }
        for c in &r.candidates {
            if CommunityCovariates::FIELDS.iter().all(|f| f != c) {
                return bad(format!("unknown candidate covariate `{c}`"));
            }
        }
        let mut seen = r.candidates.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != r.candidates.len() {
            return bad("duplicate candidate covariate".into());
        }
        for f in &r.fixed {
            if f != TIME_SQ && !r.candidates.contains(f) {
                return bad(format!("fixed variable `{f}` is not a candidate"));
            }
        }
        if self.markov.n_sim == 0 {
            return bad("n_sim must be at least 1".into());
        }
        if !(self.markov.kappa >= 0.0 && self.markov.kappa.is_finite()) {
            return bad(format!("kappa {} must be a non-negative number", self.markov.kappa));
        }
        let eps = self.zero_replace.resolve(self.markov.n_sim);
        if !(eps > 0.0 && eps < 1.0 / 16.0) {
            return bad(format!("zero-replacement epsilon {eps} outside (0, 1/16)"));
        }
        if self.clustering.k == 0 || self.clustering.restarts == 0 {
            return bad("clustering k and restarts must be at least 1".into());
        }
        let t = self.export.ternary;
        if t[0] == t[1] || t[1] == t[2] || t[0] == t[2] {
            return bad("ternary categories must be distinct".into());
        }
        Ok(())
    }

    pub fn grid(&self) -> TimeGrid {
        TimeGrid { steps: self.grid.steps, slot_minutes: self.grid.slot_minutes }
    }

    pub fn reduction_map(&self) -> ReductionMap {
        ReductionMap::new(self.clustering.reduction.clone())
    }

    pub fn mapping(&self) -> Result<CategoryMapping> {
        match self.paths.mapping.as_str() {
            "default" => Ok(CategoryMapping::default_atus()),
            "identity" => Ok(CategoryMapping::identity()),
            path => {
                let f = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
                CategoryMapping::from_csv(f, path)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "[paths]\ndiaries = \"d.csv\"\ncovariates = \"c.csv\"\n";

    #[test]
    fn defaults_and_relative_paths() {
        let cfg = PipelineConfig::from_toml(MINIMAL, Path::new("/data/run")).unwrap();
        assert_eq!(cfg.paths.diaries, PathBuf::from("/data/run/d.csv"));
        assert_eq!(cfg.paths.output, PathBuf::from("/data/run/out"));
        assert_eq!(cfg.regression.split_fraction, 0.8);
        assert_eq!(cfg.clustering.k, 3);
        assert_eq!(cfg.zero_replace.resolve(10_000), 5e-5);
    }

    #[test]
    fn unknown_key_rejected() {
        let text = format!("{MINIMAL}[markov]\nkapa = 0.5\n");
        assert!(matches!(PipelineConfig::from_toml(&text, Path::new(".")), Err(Error::Config(_))));
    }

    #[test]
    fn split_fraction_one_rejected() {
        let text = format!("{MINIMAL}[regression]\nsplit_fraction = 1.0\n");
        assert!(matches!(PipelineConfig::from_toml(&text, Path::new(".")), Err(Error::Config(_))));
    }

    #[test]
    fn explicit_epsilon_and_reduction() {
        let text = format!(
            "{MINIMAL}[zero_replace]\nepsilon = 0.001\n[clustering.reduction]\nc01 = \"out\"\nc02 = \"sleep\"\n"
        );
        let cfg = PipelineConfig::from_toml(&text, Path::new(".")).unwrap();
        assert_eq!(cfg.zero_replace.resolve(10), 0.001);
        assert_eq!(cfg.clustering.reduction.len(), 2);
        let bad = format!("{MINIMAL}[zero_replace]\nepsilon = \"sometimes\"\n");
        assert!(PipelineConfig::from_toml(&bad, Path::new(".")).is_err());
    }

    #[test]
    fn toml_round_trip() {
        let cfg = PipelineConfig::new("/a/d.csv", "/a/c.csv", "/a/out");
        let back = PipelineConfig::from_toml(&cfg.to_toml().unwrap(), Path::new("/")).unwrap();
        assert_eq!(back, cfg);
    }
}
