//! Acceptance criteria, one test per criterion. Each prints a single
//! `[Cnn] PASS|FAIL ...` line to stderr (bypassing capture) before asserting.

mod common;

use std::io::Write;
use std::path::PathBuf;
use std::sync::OnceLock;
use std::time::Instant;

use activity_trajectories::pipeline::run::{run_through, write_outputs};
use activity_trajectories::pipeline::synth::{borough_covariates, fixture_truth, sample_diaries};
use activity_trajectories::pipeline::{generate_synthetic, PipelineConfig, RunOutput};
use activity_trajectories::stats::{
    boxs_m_test, correlation_matrix, kmeans, t_test_per_component, ternary_coordinates, ternary_inverse,
    validate_trajectories, welch_t_test,
};
use activity_trajectories::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{dirichlet_sample, random_design, random_model};

fn report(id: u32, pass: bool, detail: &str) {
    let line = format!("[C{id:02}] {} {detail}\n", if pass { "PASS" } else { "FAIL" });
    let _ = std::io::stderr().lock().write_all(line.as_bytes());
}

fn check(id: u32, pass: bool, detail: String) {
    report(id, pass, &detail);
    assert!(pass, "criterion {id} failed: {detail}");
}

struct Fixture {
    _dir: tempfile::TempDir,
    root: PathBuf,
    config: PipelineConfig,
    hash: String,
    output: RunOutput,
}

/// Five-community fixture (5 communities, 1000 diaries each), run once per process.
fn fixture() -> &'static Fixture {
    static FIXTURE: OnceLock<Fixture> = OnceLock::new();
    FIXTURE.get_or_init(|| {
        let dir = tempfile::tempdir().unwrap();
        let root = dir.path().to_path_buf();
        let files = generate_synthetic(&fixture_truth(), 1000, 2015, &root).unwrap();
        let (config, hash) = PipelineConfig::load(&files.config).unwrap();
        let output = run_through(&config, &hash, Stage::Export).unwrap();
        Fixture { _dir: dir, root, config, hash, output }
    })
}

#[test]
fn c01_correlation_fidelity() {
    let start = Instant::now();
    let m = correlation_matrix(&borough_covariates(), &["diversity", "racial_segregation"]).unwrap();
    let r = m.get("diversity", "racial_segregation").unwrap();
    let secs = start.elapsed().as_secs_f64();
    check(1, (r - 0.81).abs() <= 0.005 && secs < 1.0, format!("r = {r:.4}, {secs:.3} s"));
}

#[test]
fn c02_boxm_df() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let group = |rng: &mut ChaCha8Rng| -> Vec<Vec<f64>> {
        (0..8).map(|_| (0..96).map(|_| rng.random::<f64>()).collect()).collect()
    };
    let (a, b) = (group(&mut rng), group(&mut rng));
    let m = boxs_m_test(&a, &b).unwrap();
    let secs = start.elapsed().as_secs_f64();
    check(2, m.df == 4656 && secs < 1.0, format!("dim {}, df = {}, {secs:.3} s", m.dim, m.df));
}

#[test]
fn c03_ternary_point_d() {
    use ActivityCategory::*;
    let shares = [0.35, 0.43, 0.22];
    // Remaining categories carry 0.4 of the mass; the triple is renormalized.
    let mut comp = [0.08; NCAT];
    comp[C05.index()] = 0.6 * shares[0];
    comp[C02.index()] = 0.6 * shares[1];
    comp[C07.index()] = 0.6 * shares[2];
    let p = ternary_coordinates(&[comp], [C05, C02, C07]).unwrap()[0];
    let back = ternary_inverse(p.x, p.y);
    let err = (0..3).map(|i| (back[i] - shares[i]).abs()).fold(0.0, f64::max);
    let s3 = 3f64.sqrt();
    let inside = p.y >= 0.0 && p.y <= s3 * p.x && p.y <= s3 * (1.0 - p.x);
    check(3, inside && err <= 1e-12, format!("(x, y) = ({:.6}, {:.6}), inverse error {err:.1e}", p.x, p.y));
}

#[test]
fn c04_dirichlet_closed_forms() {
    let flat = DirichletParams::new(vec![1.0, 1.0, 1.0]).unwrap();
    let e1 = (dirichlet_log_density(&[0.2, 0.3, 0.5], &flat).unwrap() - 2f64.ln()).abs();
    let skew = DirichletParams::new(vec![2.0, 1.0, 1.0]).unwrap();
    let e2 = (dirichlet_log_density(&[0.5, 0.25, 0.25], &skew).unwrap().exp() - 3.0).abs();
    check(4, e1 <= 1e-10 && e2 <= 1e-9, format!("|ln f - ln 2| = {e1:.1e}, |f - 3| = {e2:.1e}"));
}

#[test]
fn c05_special_functions() {
    let e_gamma = (digamma(1.0).unwrap() + 0.5772156649).abs();
    let recurrence = [0.5, 1.0, 2.5, 10.0]
        .iter()
        .map(|&x| (digamma(x + 1.0).unwrap() - digamma(x).unwrap() - 1.0 / x).abs())
        .fold(0.0, f64::max);
    let fd = (0..=30)
        .map(|k| {
            let x = 0.1 * 1000f64.powf(k as f64 / 30.0);
            let h = 1e-5 * x;
            let num = (lgamma(x + h).unwrap() - lgamma(x - h).unwrap()) / (2.0 * h);
            let psi = digamma(x).unwrap();
            ((num - psi) / psi).abs()
        })
        .fold(0.0, f64::max);
    check(
        5,
        e_gamma <= 1e-9 && recurrence <= 1e-10 && fd <= 1e-6,
        format!("digamma(1) error {e_gamma:.1e}, recurrence {recurrence:.1e}, finite-difference rel {fd:.1e}"),
    );
}

#[test]
fn c06_score_check() {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for inst in 0..20u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(600 + inst);
        let (x, beta) = random_design(&mut rng, 50, 2);
        let y: Vec<Composition> = x.iter().map(|r| dirichlet_sample(&mut rng, &beta, r)).collect();
        let (_, score) = loglik_and_score(&beta, &x, &y).unwrap();
        for d in 0..NCAT {
            for j in 0..beta[d].len() {
                let h = 1e-6 * beta[d][j].abs().max(1.0);
                let mut up = beta.clone();
                up[d][j] += h;
                let mut dn = beta.clone();
                dn[d][j] -= h;
                let fd =
                    (loglik_and_score(&up, &x, &y).unwrap().0 - loglik_and_score(&dn, &x, &y).unwrap().0) / (2.0 * h);
                worst = worst.max((score[d][j] - fd).abs() / score[d][j].abs().max(1.0));
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    check(6, worst <= 1e-5 && secs < 10.0, format!("max relative error {worst:.1e} over 20 instances, {secs:.2} s"));
}

#[test]
fn c07_parameter_recovery() {
    let start = Instant::now();
    let reps = 20;
    let mut hits = vec![vec![0usize; 4]; NCAT];
    let mut joint = 0;
    let mut identities = true;
    for rep in 0..reps as u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(700 + rep);
        let (x, beta) = random_design(&mut rng, 500, 2);
        let y: Vec<Composition> = x.iter().map(|r| dirichlet_sample(&mut rng, &beta, r)).collect();
        let names = vec!["u".to_string(), "v".to_string()];
        let fit = fit_regression(&x, &y, &names, &FitOptions::default()).unwrap();
        assert!(fit.converged);
        identities &= common::information_identities_hold(&fit);
        let mut all = true;
        for d in 0..NCAT {
            for j in 0..4 {
                let se = fit.std_errors[d][j].unwrap();
                let ok = (fit.beta[d][j] - beta[d][j]).abs() <= 3.0 * se;
                hits[d][j] += ok as usize;
                all &= ok;
            }
        }
        joint += all as usize;
    }
    let worst = hits.iter().flatten().copied().min().unwrap();
    let need = (0.95 * reps as f64).ceil() as usize;
    let secs = start.elapsed().as_secs_f64();
    check(
        7,
        worst >= need && identities && secs < 120.0,
        format!(
            "least-covered coefficient within 3 SE in {worst}/{reps} replications (need {need}); \
             all 32 jointly in {joint}/{reps}; {secs:.1} s"
        ),
    );
}

#[test]
fn c08_markov_consistency() {
    let start = Instant::now();
    let truth = fixture_truth();
    let diaries = sample_diaries(&truth, 1000, 8);
    let (mut rows, mut within, mut within_3se, mut worst) = (0usize, 0usize, 0usize, 0f64);
    for (model, seqs) in truth.models.iter().zip(&diaries) {
        let est = estimate_transitions(seqs, 0.0).unwrap();
        for t in 0..STEPS - 1 {
            let mut visits = [0usize; NCAT];
            for s in seqs {
                visits[s.slots()[t].index()] += 1;
            }
            for p in 0..NCAT {
                if visits[p] < 30 {
                    continue;
                }
                rows += 1;
                let n = visits[p] as f64;
                let (mut linf, mut calibrated) = (0f64, true);
                for q in 0..NCAT {
                    let truth_pq = model.matrices()[t][p][q];
                    let err = (est.matrices()[t][p][q] - truth_pq).abs();
                    linf = linf.max(err);
                    calibrated &= err <= 4.0 * (truth_pq * (1.0 - truth_pq) / n).sqrt() + 1e-12;
                }
                worst = worst.max(linf);
                within += (linf <= 0.05) as usize;
                within_3se += calibrated as usize;
            }
        }
    }

    let mut sim_worst: f64 = 0.0;
    let mut models: Vec<TransitionModel> = truth.models.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(88);
    models.extend((0..3).map(|_| random_model(&mut rng)));
    for (i, m) in models.iter().enumerate() {
        let sim = simulate_profile(m, 10_000, 80 + i as u64).unwrap();
        let exact = analytic_profile(m);
        for (a, b) in sim.rows().iter().zip(exact.rows()) {
            for d in 0..NCAT {
                sim_worst = sim_worst.max((a[d] - b[d]).abs());
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    check(
        8,
        within == rows && sim_worst <= 0.02 && secs < 60.0,
        format!(
            "{within}/{rows} rows with >= 30 visits have L-inf <= 0.05 (max {worst:.3}); \
             {within_3se}/{rows} rows within 4 binomial SE per entry; \
             simulate vs analytic max {sim_worst:.4} over {} models; {secs:.1} s",
            models.len()
        ),
    );
}

fn parse_rows(bytes: &[u8]) -> Vec<Vec<f64>> {
    std::str::from_utf8(bytes)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            f[f.len() - NCAT..].iter().map(|v| v.parse().unwrap()).collect()
        })
        .collect()
}

#[test]
fn c09_compositional_hygiene() {
    let fx = fixture();
    let mut checked = 0usize;
    let mut bad = Vec::new();
    let mut inspect = |label: &str, rows: Vec<Vec<f64>>| {
        for (i, r) in rows.iter().enumerate() {
            checked += 1;
            let sum: f64 = r.iter().sum();
            if (sum - 1.0).abs() > 1e-9 || r.iter().any(|&v| !(v > 0.0)) {
                bad.push(format!("{label} row {}", i + 1));
            }
        }
    };
    for (name, bytes) in &fx.output.artifacts {
        if name.starts_with("profiles/") || name == "predictions.csv" {
            inspect(name, parse_rows(bytes));
        }
    }
    for (cid, profile) in &fx.output.profiles {
        inspect(cid, profile.rows().iter().map(|r| r.to_vec()).collect());
    }
    for (i, m) in fixture_truth().models.iter().enumerate() {
        inspect(&format!("fixture truth {i}"), analytic_profile(m).rows().iter().map(|r| r.to_vec()).collect());
    }
    check(9, bad.is_empty() && checked > 0, format!("{checked} composition rows checked, {} violations", bad.len()));
}

#[test]
fn c10_validation_sanity() {
    let profile = analytic_profile(&fixture_truth().models[0]);
    let rows = &profile.rows()[..96];
    let same = validate_trajectories(rows, rows).unwrap();
    let group: Vec<Vec<f64>> =
        (0..20).map(|i| (0..5).map(|j| ((i * 7 + j * 3) % 11) as f64 + 0.1 * j as f64).collect()).collect();
    let low_dim = boxs_m_test(&group, &group).unwrap();
    let tt = t_test_per_component(rows, rows).unwrap();
    let (t, _, _) = welch_t_test(&[0.1, 0.2, 0.3], &[0.4, 0.5, 0.6]).unwrap();
    let m = same.boxm.m.abs().max(low_dim.m.abs());
    let p = same.boxm.p.min(low_dim.p);
    let all_one = tt.len() == NCAT && tt.iter().all(|r| r.p == 1.0);
    check(
        10,
        m <= 1e-9 && p >= 0.999 && all_one && (t + 3.674).abs() <= 1e-3,
        format!("Box's M on copies {m:.1e} (p {p}); identical t-tests all p = 1: {all_one}; Welch t = {t:.4}"),
    );
}

#[test]
fn c11_information_criteria() {
    let fx = fixture();
    let fit = fx.output.fit.as_ref().unwrap();
    let ok = common::information_identities_hold(fit);
    check(
        11,
        ok && fit.n_obs == 384,
        format!(
            "k = {}, n_obs = {}, AIC {:.3}, BIC {:.3}, identities hold: {ok}",
            fit.n_params, fit.n_obs, fit.aic, fit.bic
        ),
    );
}

#[test]
fn c12_end_to_end_determinism() {
    let fx = fixture();
    let start = Instant::now();
    let mut dirs = Vec::new();
    for run in 0..2 {
        let mut cfg = fx.config.clone();
        cfg.paths.output = fx.root.join(format!("determinism-{run}"));
        let out = run_through(&cfg, &fx.hash, Stage::Export).unwrap();
        write_outputs(&cfg.paths.output, &out.artifacts).unwrap();
        dirs.push((cfg.paths.output, out.artifacts));
    }
    let secs = start.elapsed().as_secs_f64() / 2.0;
    let (a, b) = (&dirs[0], &dirs[1]);
    let mut identical = a.1.keys().eq(b.1.keys());
    for name in a.1.keys() {
        let fa = std::fs::read(a.0.join(name)).unwrap();
        let fb = std::fs::read(b.0.join(name)).unwrap();
        identical &= fa == fb && fa == a.1[name];
    }
    check(
        12,
        identical && secs < 180.0,
        format!("{} files byte-identical across runs: {identical}; {secs:.1} s per run", a.1.len()),
    );
}

#[test]
fn c13_kmeans_toy_optimum() {
    let points: Vec<Vec<f64>> =
        [[0.0, 0.0], [1.0, 0.2], [0.4, 1.1], [5.0, 5.0], [6.2, 4.1], [2.6, 3.0]].iter().map(|p| p.to_vec()).collect();
    let mut best = f64::INFINITY;
    for mask in 1u32..(1 << 6) - 1 {
        let mut inertia = 0.0;
        for side in [true, false] {
            let members: Vec<&Vec<f64>> =
                (0..6).filter(|i| ((mask >> i) & 1 == 1) == side).map(|i| &points[i]).collect();
            let n = members.len() as f64;
            let c = [members.iter().map(|p| p[0]).sum::<f64>() / n, members.iter().map(|p| p[1]).sum::<f64>() / n];
            inertia += members.iter().map(|p| (p[0] - c[0]).powi(2) + (p[1] - c[1]).powi(2)).sum::<f64>();
        }
        best = best.min(inertia);
    }
    let fit = kmeans(&points, 2, 13, 10).unwrap();
    check(
        13,
        (fit.inertia - best).abs() <= 1e-12 * best.max(1.0),
        format!("k-means inertia {:.12}, brute-force optimum {best:.12}", fit.inertia),
    );
}
