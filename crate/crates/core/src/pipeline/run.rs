//! Staged pipeline run. All artifacts are assembled in memory and written
//! only after every requested stage has succeeded.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::activity::{ActivityCategory, Composition, CompositionMatrix, NCAT};
use crate::error::{Error, Result, Stage};
use crate::markov::{estimate_transitions, simulate_profile_with, TransitionModel};
use crate::pipeline::config::PipelineConfig;
use crate::pipeline::dataset::{build_dataset, split_train_test};
use crate::pipeline::ingest::ingest;
use crate::pipeline::synth::TruthManifest;
use crate::pipeline::write_atomic;
use crate::regression::{coefficient_table, fit_regression, predict, RegressionFit};
use crate::stats::correlation::correlation_matrix;
use crate::stats::kmeans::{encode_diary, kmeans, ClusterResult};
use crate::stats::select::{select_variables, Selection};
use crate::stats::ternary::ternary_coordinates;
use crate::stats::validation::{validate_trajectories, TestReport};

/// Derives a per-community seed so communities never share random streams.
fn community_seed(seed: u64, index: usize) -> u64 {
    seed ^ (index as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// File-name-safe form of a community id.
fn slug(id: &str) -> String {
    id.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' }).collect()
}

fn json<T: Serialize>(v: &T) -> Result<Vec<u8>> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s.into_bytes())
}

fn check_row(row: &Composition, what: &str) -> Result<()> {
    let sum: f64 = row.iter().sum();
    if (sum - 1.0).abs() > 1e-9 || row.iter().any(|v| !(*v > 0.0)) {
        return Err(Error::InvalidInput(format!("{what}: composition {row:?} is not strictly interior")));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommunityReport {
    pub community_id: String,
    pub n_diaries: usize,
    pub cluster_shares: Vec<f64>,
    pub cluster_inertia: f64,
    pub artifacts: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitSummary {
    pub covariates: Vec<String>,
    pub converged: bool,
    pub iterations: usize,
    pub loglik: f64,
    pub aic: f64,
    pub bic: f64,
    pub n_obs: usize,
    pub n_params: usize,
    /// One model over all communities.
    pub pooled: bool,
    pub p_value_method: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecoveryEntry {
    pub category: ActivityCategory,
    pub regressor: String,
    pub truth: f64,
    pub estimate: f64,
    pub std_error: f64,
    pub z: f64,
    pub within_3se: bool,
}

/// Comparison of fitted coefficients with the generating `β*`.
///
/// The fixture's response noise comes from finite diary and simulation
/// samples, so its precision does not follow `exp(xβ*)`; only the
/// category-centred contrasts `β_{d,j} − mean_e β_{e,j}` that fix the mean
/// composition are identified and compared.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecoveryReport {
    pub basis: String,
    pub entries: Vec<RecoveryEntry>,
    pub within: usize,
    pub total: usize,
    pub fraction: f64,
    pub required_fraction: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    pub config_sha256: String,
    pub markov_seed: u64,
    pub split_seed: u64,
    pub clustering_seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub provenance: Provenance,
    pub communities: Vec<CommunityReport>,
    pub kept_variables: Vec<String>,
    pub dropped_variables: Vec<String>,
    pub n_train: usize,
    pub n_test: usize,
    pub fit: FitSummary,
    pub test_report: TestReport,
    pub recovery: Option<RecoveryReport>,
    /// Every file written by the run, relative to the output directory.
    pub artifacts: Vec<String>,
}

/// Results of the stages that ran, and their artifacts keyed by relative path.
#[derive(Debug, Clone, Default)]
pub struct RunOutput {
    pub artifacts: BTreeMap<String, Vec<u8>>,
    pub clusters: Vec<(String, ClusterResult)>,
    pub models: Vec<(String, TransitionModel)>,
    pub profiles: Vec<(String, CompositionMatrix)>,
    pub selection: Option<Selection>,
    pub fit: Option<RegressionFit>,
    pub predictions: Vec<(String, usize, Composition)>,
    pub test_report: Option<TestReport>,
    pub recovery: Option<RecoveryReport>,
    pub report: Option<RunReport>,
}

/// Category-centred contrast check against the truth manifest.
pub fn recovery_check(fit: &RegressionFit, manifest: &TruthManifest) -> Result<Option<RecoveryReport>> {
    let Some(truth) = &manifest.beta else { return Ok(None) };
    let Some(cov) = &fit.covariance else { return Ok(None) };
    let target = truth.restandardize(&fit.standardization)?;
    let w = fit.width();
    let labels = fit.regressor_labels();
    let centred = |b: &[Vec<f64>], d: usize, j: usize| b[d][j] - (0..NCAT).map(|e| b[e][j]).sum::<f64>() / NCAT as f64;
    let mut entries = Vec::new();
    for d in 0..NCAT {
        for j in 0..w {
            // a = e_{d,j} − (1/8) Σ_e e_{e,j}
            let mut var = 0.0;
            for e1 in 0..NCAT {
                let a1 = f64::from(u8::from(e1 == d)) - 1.0 / NCAT as f64;
                for e2 in 0..NCAT {
                    let a2 = f64::from(u8::from(e2 == d)) - 1.0 / NCAT as f64;
                    var += a1 * a2 * cov[(e1 * w + j, e2 * w + j)];
                }
            }
            let se = var.max(0.0).sqrt();
            let (t, est) = (centred(&target, d, j), centred(&fit.beta, d, j));
            let z = (est - t) / se;
            entries.push(RecoveryEntry {
                category: ActivityCategory::ALL[d],
                regressor: labels[j].clone(),
                truth: t,
                estimate: est,
                std_error: se,
                z,
                within_3se: z.abs() <= 3.0,
            });
        }
    }
    let within = entries.iter().filter(|e| e.within_3se).count();
    let total = entries.len();
    let fraction = within as f64 / total as f64;
    Ok(Some(RecoveryReport {
        basis: "category-centred contrasts".into(),
        entries,
        within,
        total,
        fraction,
        required_fraction: 0.95,
        pass: fraction >= 0.95,
    }))
}

fn cluster_csv(diary_ids: &[&str], r: &ClusterResult) -> String {
    let mut s = String::from("row_kind,id,cluster,share\n");
    for (id, a) in diary_ids.iter().zip(&r.assignments) {
        let _ = writeln!(s, "diary,{id},{a},");
    }
    for (k, share) in r.shares.iter().enumerate() {
        let _ = writeln!(s, "summary,,{},{share}", k + 1);
    }
    s
}

fn predictions_csv(rows: &[(String, usize, Composition)]) -> String {
    let mut s = String::from("community_id,step");
    for c in ActivityCategory::ALL {
        s.push(',');
        s.push_str(c.code());
    }
    s.push('\n');
    for (cid, step, y) in rows {
        let _ = write!(s, "{cid},{step}");
        for v in y {
            let _ = write!(s, ",{v}");
        }
        s.push('\n');
    }
    s
}

fn ternary_csv(profile: &CompositionMatrix, triple: [ActivityCategory; 3]) -> Result<String> {
    let pts = ternary_coordinates(profile.rows(), triple)?;
    let mut s = format!("step,x,y,{},{},{}\n", triple[0].code(), triple[1].code(), triple[2].code());
    for (i, p) in pts.iter().enumerate() {
        let _ = writeln!(s, "{},{},{},{},{},{}", i + 1, p.x, p.y, p.shares[0], p.shares[1], p.shares[2]);
    }
    Ok(s)
}

/// Runs every stage up to and including `last`.
pub fn run_through(config: &PipelineConfig, config_hash: &str, last: Stage) -> Result<RunOutput> {
    let mut out = RunOutput::default();
    let grid = config.grid();

    let data = ingest(config).map_err(|e| e.in_stage(Stage::Ingest))?;
    let summary = serde_json::json!({
        "n_records": data.n_records,
        "communities": data.communities.iter().map(|c| serde_json::json!({
            "community_id": c.community_id,
            "n_diaries": c.diaries.len(),
        })).collect::<Vec<_>>(),
    });
    out.artifacts.insert("ingest_summary.json".into(), json(&summary)?);
    if last == Stage::Ingest {
        return Ok(out);
    }

    let map = config.reduction_map();
    let clusters = data
        .communities
        .par_iter()
        .enumerate()
        .map(|(ci, c)| {
            let points = c.diaries.iter().map(|d| encode_diary(d, &map)).collect::<Result<Vec<_>>>()?;
            let seed = community_seed(config.clustering.seed, ci);
            kmeans(&points, config.clustering.k, seed, config.clustering.restarts)
        })
        .collect::<Result<Vec<_>>>()
        .map_err(|e| e.in_stage(Stage::Cluster))?;
    for (c, r) in data.communities.iter().zip(clusters) {
        let ids: Vec<&str> = c.diaries.iter().map(|d| d.person_id.as_str()).collect();
        out.artifacts.insert(format!("clusters/{}.csv", slug(&c.community_id)), cluster_csv(&ids, &r).into_bytes());
        out.clusters.push((c.community_id.clone(), r));
    }
    if last == Stage::Cluster {
        return Ok(out);
    }

    let epsilon = config.zero_replace.resolve(config.markov.n_sim);
    let simulated = data
        .communities
        .par_iter()
        .enumerate()
        .map(|(ci, c)| {
            let model = estimate_transitions(&c.diaries, config.markov.kappa)?;
            let seed = community_seed(config.markov.seed, ci);
            let profile = simulate_profile_with(&model, config.markov.n_sim, seed, epsilon)?;
            Ok((model, profile))
        })
        .collect::<Result<Vec<_>>>()
        .map_err(|e| e.in_stage(Stage::Simulate))?;
    for (c, (model, profile)) in data.communities.iter().zip(simulated) {
        for row in profile.rows() {
            check_row(row, "profile").map_err(|e| e.in_stage(Stage::Simulate))?;
        }
        let s = slug(&c.community_id);
        out.artifacts.insert(format!("profiles/{s}.csv"), profile.to_csv().into_bytes());
        out.artifacts.insert(format!("models/{s}.json"), {
            let mut j = model.to_json()?;
            j.push('\n');
            j.into_bytes()
        });
        out.models.push((c.community_id.clone(), model));
        out.profiles.push((c.community_id.clone(), profile));
    }
    if last == Stage::Simulate {
        return Ok(out);
    }

    let reg = &config.regression;
    let options = reg.fit_options();
    let selection = (|| {
        let fields: Vec<&str> = reg.candidates.iter().map(String::as_str).collect();
        let corr = correlation_matrix(&data.covariates, &fields)?;
        out.artifacts.insert("correlation.csv".into(), corr.to_csv().into_bytes());
        let full = build_dataset(&out.profiles, &data.covariates, &reg.candidates, &grid)?;
        let time_sq: Vec<f64> = full.rows.iter().map(|r| r.time_sq).collect();
        let columns: Vec<(String, Vec<f64>)> =
            reg.candidates.iter().map(|n| (n.clone(), full.column(n).expect("candidate column"))).collect();
        let y = full.responses(&(0..full.len()).collect::<Vec<_>>());
        select_variables(&time_sq, &columns, &y, reg.correlation_threshold, &reg.fixed, &options)
    })()
    .map_err(|e| e.in_stage(Stage::Select))?;
    out.artifacts.insert("selection.json".into(), json(&selection)?);
    let kept_covariates: Vec<String> = selection.kept.iter().skip(1).cloned().collect();
    out.selection = Some(selection);
    if last == Stage::Select {
        return Ok(out);
    }

    let dataset =
        build_dataset(&out.profiles, &data.covariates, &kept_covariates, &grid).map_err(|e| e.in_stage(Stage::Fit))?;
    let split = split_train_test(&dataset, reg.split_fraction, reg.split_seed).map_err(|e| e.in_stage(Stage::Fit))?;
    let fit = (|| {
        let std = dataset.standardization(&split.train)?;
        let x = dataset.design(&split.train, &std)?;
        let y = dataset.responses(&split.train);
        let mut fit = fit_regression(&x, &y, &kept_covariates, &options)?;
        fit.standardization = std;
        if !fit.converged {
            return Err(Error::NotConverged { iterations: fit.iterations });
        }
        Ok(fit)
    })()
    .map_err(|e| e.in_stage(Stage::Fit))?;
    out.artifacts.insert("fit.json".into(), {
        let mut j = fit.to_json()?;
        j.push('\n');
        j.into_bytes()
    });
    let mut table = coefficient_table(&fit);
    let _ = writeln!(table, "Pooled over {} communities; p-values from two-sided z-tests.", out.profiles.len());
    out.artifacts.insert("coefficients.txt".into(), table.into_bytes());
    if last == Stage::Fit {
        out.fit = Some(fit);
        return Ok(out);
    }

    let predictions = (|| {
        let x = dataset.design(&split.test, &fit.standardization)?;
        split
            .test
            .iter()
            .zip(&x)
            .map(|(&i, xi)| {
                let (_, mean) = predict(&fit, xi)?;
                check_row(&mean, "prediction")?;
                Ok((dataset.rows[i].community_id.clone(), dataset.rows[i].step, mean))
            })
            .collect::<Result<Vec<_>>>()
    })()
    .map_err(|e| e.in_stage(Stage::Predict))?;
    out.artifacts.insert("predictions.csv".into(), predictions_csv(&predictions).into_bytes());
    out.predictions = predictions;
    if last == Stage::Predict {
        out.fit = Some(fit);
        return Ok(out);
    }

    let observed = dataset.responses(&split.test);
    let predicted: Vec<Composition> = out.predictions.iter().map(|p| p.2).collect();
    let report = validate_trajectories(&observed, &predicted).map_err(|e| e.in_stage(Stage::Validate))?;
    out.artifacts.insert("test_report.json".into(), json(&report)?);
    out.test_report = Some(report);
    if last == Stage::Validate {
        out.fit = Some(fit);
        return Ok(out);
    }

    for (cid, profile) in &out.profiles {
        let csv = ternary_csv(profile, config.export.ternary).map_err(|e| e.in_stage(Stage::Export))?;
        out.artifacts.insert(format!("ternary/{}.csv", slug(cid)), csv.into_bytes());
    }

    if let Some(path) = &config.paths.truth_manifest {
        let manifest = TruthManifest::read(path).map_err(|e| e.in_stage(Stage::Export))?;
        out.recovery = recovery_check(&fit, &manifest).map_err(|e| e.in_stage(Stage::Export))?;
    }

    let communities = data
        .communities
        .iter()
        .zip(&out.clusters)
        .map(|(c, (_, r))| {
            let s = slug(&c.community_id);
            CommunityReport {
                community_id: c.community_id.clone(),
                n_diaries: c.diaries.len(),
                cluster_shares: r.shares.clone(),
                cluster_inertia: r.inertia,
                artifacts: vec![
                    format!("clusters/{s}.csv"),
                    format!("profiles/{s}.csv"),
                    format!("models/{s}.json"),
                    format!("ternary/{s}.csv"),
                ],
            }
        })
        .collect();
    let selection = out.selection.as_ref().expect("selection ran");
    let mut artifacts: Vec<String> = out.artifacts.keys().cloned().collect();
    artifacts.push("run_report.json".into());
    let report = RunReport {
        provenance: Provenance {
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            config_sha256: config_hash.into(),
            markov_seed: config.markov.seed,
            split_seed: reg.split_seed,
            clustering_seed: config.clustering.seed,
        },
        communities,
        kept_variables: selection.kept.clone(),
        dropped_variables: selection.dropped.clone(),
        n_train: split.train.len(),
        n_test: split.test.len(),
        fit: FitSummary {
            covariates: fit.covariate_names.clone(),
            converged: fit.converged,
            iterations: fit.iterations,
            loglik: fit.loglik,
            aic: fit.aic,
            bic: fit.bic,
            n_obs: fit.n_obs,
            n_params: fit.n_params,
            pooled: true,
            p_value_method: "two-sided z-test on inverse observed information".into(),
        },
        test_report: out.test_report.clone().expect("validation ran"),
        recovery: out.recovery.clone(),
        artifacts,
    };
    out.artifacts.insert("run_report.json".into(), json(&report)?);
    out.report = Some(report);
    out.fit = Some(fit);
    Ok(out)
}

/// Writes artifacts under `dir`, `run_report.json` last.
pub fn write_outputs(dir: &Path, artifacts: &BTreeMap<String, Vec<u8>>) -> Result<()> {
    let (report, rest): (Vec<_>, Vec<_>) = artifacts.iter().partition(|(k, _)| k.as_str() == "run_report.json");
    for (rel, bytes) in rest.into_iter().chain(report) {
        write_atomic(&dir.join(rel), bytes).map_err(|e| e.in_stage(Stage::Export))?;
    }
    Ok(())
}

/// Runs the whole pipeline and writes every artifact to the configured output directory.
pub fn run_all(config: &PipelineConfig, config_hash: &str) -> Result<RunReport> {
    let out = run_through(config, config_hash, Stage::Export)?;
    write_outputs(&config.paths.output, &out.artifacts)?;
    Ok(out.report.expect("export stage builds the report"))
}
