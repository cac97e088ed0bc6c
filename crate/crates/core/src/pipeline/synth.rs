//! Deterministic synthetic fixtures: five communities shaped like the New
//! York boroughs, a known coefficient matrix `β*`, and Markov chains whose
//! step marginals equal the Dirichlet means implied by `β*`.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::activity::{ActivitySequence, CategoryMapping, CommunityCovariates, Composition, TimeGrid, NCAT, STEPS};
use crate::error::{Error, Result};
use crate::markov::{sample_path, trajectory_rng, Matrix8, TransitionModel};
use crate::pipeline::write_atomic;
use crate::regression::Standardization;

/// Known regression coefficients in the standardization they were defined with.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BetaTruth {
    pub covariate_names: Vec<String>,
    pub standardization: Standardization,
    /// `beta[d][j]` over `(1, time², covariates...)`.
    pub beta: Vec<Vec<f64>>,
}

impl BetaTruth {
    /// Re-expresses the coefficients for covariates standardized with `std`
    /// instead of `self.standardization`; the linear predictor is unchanged.
    pub fn restandardize(&self, std: &Standardization) -> Result<Vec<Vec<f64>>> {
        if std.names != self.covariate_names {
            return Err(Error::CovariateMismatch(format!(
                "truth covariates ({}) differ from fit covariates ({})",
                self.covariate_names.join(", "),
                std.names.join(", ")
            )));
        }
        let s0 = &self.standardization;
        Ok(self
            .beta
            .iter()
            .map(|b| {
                let mut out = b.clone();
                for j in 0..std.names.len() {
                    out[0] += b[j + 2] * (std.means[j] - s0.means[j]) / s0.sds[j];
                    out[j + 2] = b[j + 2] * std.sds[j] / s0.sds[j];
                }
                out
            })
            .collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommunityTruth {
    pub community_id: String,
    pub model: TransitionModel,
}

/// Everything the generator knows, written next to the fixture.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruthManifest {
    pub communities: Vec<CommunityTruth>,
    pub beta: Option<BetaTruth>,
    pub n_diaries: usize,
    pub seed: u64,
}

impl TruthManifest {
    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(serde_json::from_str(&text)?)
    }
}

/// Inputs to [`generate_synthetic`].
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticTruth {
    pub covariates: Vec<CommunityCovariates>,
    pub models: Vec<TransitionModel>,
    pub beta: Option<BetaTruth>,
}

/// Paths of a generated fixture.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixtureFiles {
    pub diaries: PathBuf,
    pub covariates: PathBuf,
    pub manifest: PathBuf,
    pub config: PathBuf,
}

/// Covariates of five borough-shaped communities. Demographic fields follow
/// published borough figures; commute times and building shares are invented.
pub fn borough_covariates() -> Vec<CommunityCovariates> {
    #[rustfmt::skip]
    let table: [(&str, [f64; 14]); 5] = [
        ("Bronx",     [34090.12, 59.34, 0.26, 34.0, 89.0, 15.23, 40088.0, 5.3, 72.76, 43.2, 0.18, 0.62, 0.08, 0.12]),
        ("Queens",    [21075.68, 76.39, 0.36, 39.0, 94.0,  9.61, 68666.0, 3.4, 82.02, 42.6, 0.14, 0.71, 0.07, 0.08]),
        ("Manhattan", [71488.69, 68.31, 0.33, 38.0, 90.0, 10.28, 86553.0, 3.4, 87.28, 31.4, 0.16, 0.52, 0.10, 0.22]),
        ("Kings",     [36573.40, 72.57, 0.43, 35.0, 90.0,  9.98, 60231.0, 4.0, 82.38, 41.9, 0.15, 0.66, 0.08, 0.11]),
        ("Richmond",  [ 8135.86, 56.54, 0.29, 40.0, 94.0,  9.83, 82783.0, 3.8, 88.75, 43.8, 0.26, 0.58, 0.07, 0.09]),
    ];
    table
        .iter()
        .map(|(id, v)| CommunityCovariates {
            community_id: id.to_string(),
            population_density: v[0],
            diversity: v[1],
            racial_segregation: v[2],
            median_age: v[3],
            male_female_ratio: v[4],
            disabilities: v[5],
            household_median_income: v[6],
            unemployment: v[7],
            education: v[8],
            transportation: v[9],
            institutional: v[10],
            residential: v[11],
            mercantile: v[12],
            business: v[13],
        })
        .collect()
}

/// Covariates carried by [`borough_beta`].
pub const BETA_COVARIATES: [&str; 4] = ["diversity", "median_age", "transportation", "residential"];

/// `β*` over `(1, time², diversity, median_age, transportation, residential)`.
/// Only category `c02` rises towards midnight.
#[rustfmt::skip]
pub fn borough_beta() -> Vec<Vec<f64>> {
    let shift = 3.9;
    let rows: [[f64; 6]; NCAT] = [
        [-0.50, -0.8,  0.10, -0.05,  0.08, -0.10],
        [ 0.33,  2.2, -0.05,  0.12, -0.06,  0.15],
        [ 0.74, -0.8, -0.12,  0.10,  0.05,  0.12],
        [ 0.44, -0.8,  0.08, -0.08,  0.00, -0.05],
        [ 1.67, -0.8,  0.15, -0.20, -0.15, -0.12],
        [-0.20, -0.8,  0.20, -0.15,  0.10, -0.08],
        [ 1.80, -0.8, -0.10,  0.18,  0.12,  0.06],
        [ 0.56, -0.8,  0.05, -0.02,  0.20, -0.10],
    ];
    rows.iter()
        .map(|r| {
            let mut v = r.to_vec();
            v[0] += shift;
            v
        })
        .collect()
}

/// Dirichlet means `softmax(x β)` per community and step, with covariates
/// standardized over the community-by-step rows.
pub fn beta_marginals(
    covariates: &[CommunityCovariates],
    names: &[String],
    beta: &[Vec<f64>],
    grid: &TimeGrid,
) -> Result<(Standardization, Vec<Vec<Composition>>)> {
    let raw_by_comm: Vec<Vec<f64>> = covariates
        .iter()
        .map(|c| {
            names
                .iter()
                .map(|f| {
                    c.get(f)
                        .ok_or_else(|| Error::MissingCovariate { community: c.community_id.clone(), field: f.clone() })
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    let replicated: Vec<Vec<f64>> =
        raw_by_comm.iter().flat_map(|r| std::iter::repeat_n(r.clone(), grid.steps)).collect();
    let std = Standardization::from_rows(names, &replicated)?;
    let marginals = raw_by_comm
        .iter()
        .map(|raw| {
            let z = std.apply(raw)?;
            Ok((1..=grid.steps)
                .map(|t| {
                    let x: Vec<f64> = [1.0, grid.time_sq(t)].into_iter().chain(z.iter().copied()).collect();
                    let mut alpha = [0.0; NCAT];
                    for (a, b) in alpha.iter_mut().zip(beta) {
                        *a = b.iter().zip(&x).map(|(b, x)| b * x).sum::<f64>().exp();
                    }
                    let a0: f64 = alpha.iter().sum();
                    alpha.map(|a| a / a0)
                })
                .collect())
        })
        .collect::<Result<Vec<Vec<Composition>>>>()?;
    Ok((std, marginals))
}

/// Chain with `μ_t P_t = μ_{t+1}` for the given strictly positive marginals.
/// `P_t = ρ_t I + (1 - ρ_t) 1 νᵀ` with `ρ_t = min(ρ, min_q μ_{t+1,q} / μ_{t,q})`.
pub fn chain_with_marginals(marginals: &[Composition], persistence: f64) -> Result<TransitionModel> {
    if marginals.len() != STEPS {
        return Err(Error::InvalidInput(format!("need {STEPS} marginals, got {}", marginals.len())));
    }
    if !(0.0..1.0).contains(&persistence) {
        return Err(Error::InvalidInput(format!("persistence {persistence} outside [0, 1)")));
    }
    let matrices = marginals
        .windows(2)
        .map(|w| {
            let (mu, next) = (&w[0], &w[1]);
            let rho = (0..NCAT).map(|q| next[q] / mu[q]).fold(persistence, f64::min);
            let mut nu = [0.0; NCAT];
            for q in 0..NCAT {
                nu[q] = ((next[q] - rho * mu[q]) / (1.0 - rho)).max(0.0);
            }
            let s: f64 = nu.iter().sum();
            nu.iter_mut().for_each(|v| *v /= s);
            let mut m: Matrix8 = [[0.0; NCAT]; NCAT];
            for (q, row) in m.iter_mut().enumerate() {
                for (e, v) in row.iter_mut().enumerate() {
                    *v = (1.0 - rho) * nu[e] + if q == e { rho } else { 0.0 };
                }
            }
            m
        })
        .collect();
    TransitionModel::new(marginals[0], matrices, 0.0)
}

/// Borough covariates, `β*` and chains of the given persistence.
pub fn borough_truth(persistence: f64) -> Result<SyntheticTruth> {
    let covariates = borough_covariates();
    let names: Vec<String> = BETA_COVARIATES.map(String::from).to_vec();
    let beta = borough_beta();
    let (std, marginals) = beta_marginals(&covariates, &names, &beta, &TimeGrid::default())?;
    let models = marginals.iter().map(|m| chain_with_marginals(m, persistence)).collect::<Result<_>>()?;
    Ok(SyntheticTruth {
        covariates,
        models,
        beta: Some(BetaTruth { covariate_names: names, standardization: std, beta }),
    })
}

/// Persistence of the default fixture chains.
pub const FIXTURE_PERSISTENCE: f64 = 0.15;

/// The default five-community fixture truth.
pub fn fixture_truth() -> SyntheticTruth {
    borough_truth(FIXTURE_PERSISTENCE).expect("built-in truth is valid")
}

/// Stream of diary `i` in community `c`.
fn diary_stream(c: usize, i: usize) -> u64 {
    ((c as u64) << 32) | i as u64
}

/// Samples `n` diaries per community.
pub fn sample_diaries(truth: &SyntheticTruth, n: usize, seed: u64) -> Vec<Vec<ActivitySequence>> {
    truth
        .covariates
        .iter()
        .zip(&truth.models)
        .enumerate()
        .map(|(c, (cov, model))| {
            (0..n)
                .map(|i| {
                    let mut rng = trajectory_rng(seed, diary_stream(c, i));
                    ActivitySequence::new(
                        format!("{}-{i:05}", cov.community_id),
                        cov.community_id.clone(),
                        sample_path(model, &mut rng),
                    )
                    .expect("sampled paths have one slot per step")
                })
                .collect()
        })
        .collect()
}

/// Diary CSV text with one row per activity episode, coded with
/// representative raw codes of the default mapping.
pub fn diaries_csv(diaries: &[Vec<ActivitySequence>], grid: &TimeGrid) -> String {
    let codes = CategoryMapping::default_atus().representative_codes();
    let mut s = String::from("person_id,community_id,start_min,end_min,raw_code\n");
    for seq in diaries.iter().flatten() {
        for e in seq.to_events(grid) {
            let _ = writeln!(s, "{},{},{},{},{}", seq.person_id, seq.community_id, e.start, e.end, codes[&e.category]);
        }
    }
    s
}

/// Writes `diaries.csv`, `covariates.csv`, `truth.json` and `pipeline.toml`
/// into `dir`. Identical arguments give byte-identical files.
pub fn generate_synthetic(truth: &SyntheticTruth, n_diaries: usize, seed: u64, dir: &Path) -> Result<FixtureFiles> {
    if truth.covariates.len() != truth.models.len() {
        return Err(Error::InvalidInput("one model per community required".into()));
    }
    let grid = TimeGrid::default();
    let diaries = sample_diaries(truth, n_diaries, seed);
    let manifest = TruthManifest {
        communities: truth
            .covariates
            .iter()
            .zip(&truth.models)
            .map(|(c, m)| CommunityTruth { community_id: c.community_id.clone(), model: m.clone() })
            .collect(),
        beta: truth.beta.clone(),
        n_diaries,
        seed,
    };
    let candidates = ["diversity", "racial_segregation", "median_age", "transportation", "residential"];
    let config = format!(
        "[paths]\n\
         diaries = \"diaries.csv\"\n\
         covariates = \"covariates.csv\"\n\
         mapping = \"default\"\n\
         truth_manifest = \"truth.json\"\n\
         output = \"out\"\n\n\
         [markov]\n\
         kappa = 0.0\n\
         n_sim = 10000\n\
         seed = {seed}\n\n\
         [zero_replace]\n\
         epsilon = \"auto\"\n\n\
         [regression]\n\
         candidates = [{}]\n\
         fixed = [\"time_sq\"]\n\
         correlation_threshold = 0.75\n\
         split_fraction = 0.8\n\
         split_seed = {seed}\n\n\
         [clustering]\n\
         k = 3\n\
         restarts = 10\n\
         seed = {seed}\n",
        candidates.map(|c| format!("\"{c}\"")).join(", ")
    );
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let files = FixtureFiles {
        diaries: dir.join("diaries.csv"),
        covariates: dir.join("covariates.csv"),
        manifest: dir.join("truth.json"),
        config: dir.join("pipeline.toml"),
    };
    write_atomic(&files.diaries, diaries_csv(&diaries, &grid).as_bytes())?;
    write_atomic(&files.covariates, &CommunityCovariates::write_csv(&truth.covariates)?)?;
    write_atomic(&files.manifest, serde_json::to_string_pretty(&manifest)?.as_bytes())?;
    write_atomic(&files.config, config.as_bytes())?;
    Ok(files)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::markov::analytic_profile;

    #[test]
    fn chain_reproduces_marginals() {
        let truth = fixture_truth();
        let names: Vec<String> = BETA_COVARIATES.map(String::from).to_vec();
        let (_, marginals) = beta_marginals(&truth.covariates, &names, &borough_beta(), &TimeGrid::default()).unwrap();
        for (model, mu) in truth.models.iter().zip(&marginals) {
            let prof = analytic_profile(model);
            for (a, b) in prof.rows().iter().zip(mu) {
                for d in 0..NCAT {
                    assert!((a[d] - b[d]).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn sleep_peaks_at_night() {
        let truth = fixture_truth();
        let names: Vec<String> = BETA_COVARIATES.map(String::from).to_vec();
        let (_, mu) = beta_marginals(&truth.covariates, &names, &borough_beta(), &TimeGrid::default()).unwrap();
        assert!(mu[0][0][1] > 0.5 && mu[0][47][1] < 0.2);
        assert!(mu.iter().flatten().flatten().all(|v| *v > 0.005));
    }

    #[test]
    fn restandardize_preserves_predictor() {
        let truth = fixture_truth();
        let bt = truth.beta.unwrap();
        let other = Standardization {
            names: bt.covariate_names.clone(),
            means: vec![60.0, 37.0, 40.0, 0.6],
            sds: vec![5.0, 2.0, 4.0, 0.05],
        };
        let conv = bt.restandardize(&other).unwrap();
        let raw = [65.0, 36.0, 42.0, 0.7];
        let z0 = bt.standardization.apply(&raw).unwrap();
        let z1 = other.apply(&raw).unwrap();
        for d in 0..NCAT {
            let eta0: f64 =
                bt.beta[d][0] + bt.beta[d][1] * 0.3 + (0..4).map(|j| bt.beta[d][j + 2] * z0[j]).sum::<f64>();
            let eta1: f64 = conv[d][0] + conv[d][1] * 0.3 + (0..4).map(|j| conv[d][j + 2] * z1[j]).sum::<f64>();
            assert!((eta0 - eta1).abs() < 1e-12);
        }
    }

    #[test]
    fn empty_and_deterministic() {
        let dir = tempfile::tempdir().unwrap();
        let truth = fixture_truth();
        let f = generate_synthetic(&truth, 0, 1, dir.path()).unwrap();
        let text = std::fs::read_to_string(&f.diaries).unwrap();
        assert_eq!(text, "person_id,community_id,start_min,end_min,raw_code\n");
        let a = generate_synthetic(&truth, 3, 5, &dir.path().join("a")).unwrap();
        let b = generate_synthetic(&truth, 3, 5, &dir.path().join("b")).unwrap();
        for (x, y) in [(a.diaries, b.diaries), (a.manifest, b.manifest), (a.config, b.config)] {
            assert_eq!(std::fs::read(x).unwrap(), std::fs::read(y).unwrap());
        }
    }
}
