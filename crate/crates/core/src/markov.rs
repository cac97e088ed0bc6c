//! Time-inhomogeneous Markov chains over the day grid.
//!
//! A [`TransitionModel`] has one 8x8 row-stochastic matrix per step boundary
//! (95 in total) and an initial distribution for step 1. Models are estimated
//! from diaries by smoothed counting, propagated exactly, or simulated with
//! per-trajectory ChaCha streams so parallel and sequential runs agree bit
//! for bit.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::activity::{ActivityCategory, ActivitySequence, Composition, CompositionMatrix, NCAT, STEPS};
use crate::error::{Error, Result};

pub type Matrix8 = [[f64; NCAT]; NCAT];

/// Tolerance on stochastic rows of a model.
pub const STOCHASTIC_TOL: f64 = 1e-12;
/// Default additive smoothing for transition counts.
pub const DEFAULT_KAPPA: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawModel", into = "RawModel")]
pub struct TransitionModel {
    initial: Composition,
    matrices: Vec<Matrix8>,
    kappa: f64,
}

#[derive(Serialize, Deserialize)]
struct RawModel {
    initial: Composition,
    matrices: Vec<Matrix8>,
    kappa: f64,
}

impl TryFrom<RawModel> for TransitionModel {
    type Error = Error;

    fn try_from(raw: RawModel) -> Result<Self> {
        TransitionModel::new(raw.initial, raw.matrices, raw.kappa)
    }
}

impl From<TransitionModel> for RawModel {
    fn from(m: TransitionModel) -> Self {
        RawModel { initial: m.initial, matrices: m.matrices, kappa: m.kappa }
    }
}

fn check_stochastic(row: &[f64], what: &str) -> Result<()> {
    if row.iter().any(|v| !v.is_finite() || *v < 0.0) {
        return Err(Error::InvalidInput(format!("{what} has a negative or non-finite entry")));
    }
    let sum: f64 = row.iter().sum();
    if (sum - 1.0).abs() > STOCHASTIC_TOL {
        return Err(Error::InvalidInput(format!("{what} sums to {sum}")));
    }
    Ok(())
}

impl TransitionModel {
    pub fn new(initial: Composition, matrices: Vec<Matrix8>, kappa: f64) -> Result<Self> {
        if matrices.len() != STEPS - 1 {
            return Err(Error::InvalidInput(format!(
                "transition model needs {} matrices, got {}",
                STEPS - 1,
                matrices.len()
            )));
        }
        if !(kappa.is_finite() && kappa >= 0.0) {
            return Err(Error::InvalidInput(format!("smoothing kappa {kappa} must be >= 0")));
        }
        check_stochastic(&initial, "initial distribution")?;
        for (t, m) in matrices.iter().enumerate() {
            for (p, row) in m.iter().enumerate() {
                check_stochastic(row, &format!("matrix {} row {}", t + 1, p + 1))?;
            }
        }
        Ok(TransitionModel { initial, matrices, kappa })
    }

    pub fn initial(&self) -> &Composition {
        &self.initial
    }

    /// Matrices indexed from 0; `matrices()[t - 1]` maps step `t` to `t + 1`.
    pub fn matrices(&self) -> &[Matrix8] {
        &self.matrices
    }

    /// Transition matrix from 1-based step `t` to `t + 1`.
    pub fn transition(&self, t: usize) -> &Matrix8 {
        &self.matrices[t - 1]
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// Estimates a model by smoothed counting.
///
/// `initial[p] = (n1[p] + κ) / (N + 8κ)` and
/// `P_t[p][q] = (n_t[p][q] + κ) / (n_t[p] + 8κ)`; a row with no visits and
/// `κ = 0` is uniform.
pub fn estimate_transitions(diaries: &[ActivitySequence], kappa: f64) -> Result<TransitionModel> {
    if diaries.is_empty() {
        return Err(Error::EmptyInput("no diaries to estimate transitions from".into()));
    }
    if !(kappa.is_finite() && kappa >= 0.0) {
        return Err(Error::InvalidInput(format!("smoothing kappa {kappa} must be >= 0")));
    }
    let mut first = [0u64; NCAT];
    let mut counts = vec![[[0u64; NCAT]; NCAT]; STEPS - 1];
    for d in diaries {
        let s = d.slots();
        first[s[0].index()] += 1;
        for t in 0..STEPS - 1 {
            counts[t][s[t].index()][s[t + 1].index()] += 1;
        }
    }
    let initial = normalize_counts(&first, kappa);
    let matrices = counts
        .iter()
        .map(|m| {
            let mut out = [[0.0; NCAT]; NCAT];
            for (p, row) in m.iter().enumerate() {
                out[p] = normalize_counts(row, kappa);
            }
            out
        })
        .collect();
    TransitionModel::new(initial, matrices, kappa)
}

fn normalize_counts(row: &[u64; NCAT], kappa: f64) -> Composition {
    let total: u64 = row.iter().sum();
    let denom = total as f64 + NCAT as f64 * kappa;
    if denom == 0.0 {
        return [1.0 / NCAT as f64; NCAT];
    }
    let mut out = [0.0; NCAT];
    for (o, &c) in out.iter_mut().zip(row) {
        *o = (c as f64 + kappa) / denom;
    }
    out
}

/// Exact marginal distribution at every step: row 1 is the initial
/// distribution, row `t + 1 = row t × P_t`.
pub fn analytic_profile(model: &TransitionModel) -> CompositionMatrix {
    let mut rows = Vec::with_capacity(STEPS);
    let mut current = model.initial;
    rows.push(current);
    for m in &model.matrices {
        let mut next = [0.0; NCAT];
        for (p, &mass) in current.iter().enumerate() {
            for (q, n) in next.iter_mut().enumerate() {
                *n += mass * m[p][q];
            }
        }
        current = next;
        rows.push(current);
    }
    CompositionMatrix::new(rows).expect("propagation preserves stochasticity")
}

/// Random stream for trajectory `index` under `seed`.
pub fn trajectory_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn draw<R: Rng>(dist: &[f64; NCAT], rng: &mut R) -> ActivityCategory {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    let mut last_positive = 0;
    for (i, &p) in dist.iter().enumerate() {
        if p > 0.0 {
            last_positive = i;
            acc += p;
            if u < acc {
                return ActivityCategory::ALL[i];
            }
        }
    }
    // rounding left u above the cumulative sum
    ActivityCategory::ALL[last_positive]
}

/// Samples one 96-step path using `rng`.
pub fn sample_path<R: Rng>(model: &TransitionModel, rng: &mut R) -> Vec<ActivityCategory> {
    let mut slots = Vec::with_capacity(STEPS);
    let mut state = draw(&model.initial, rng);
    slots.push(state);
    for m in &model.matrices {
        state = draw(&m[state.index()], rng);
        slots.push(state);
    }
    slots
}

/// Simulates one trajectory; identical `(model, seed)` give identical output.
pub fn simulate_trajectory(model: &TransitionModel, seed: u64) -> ActivitySequence {
    let mut rng = trajectory_rng(seed, 0);
    ActivitySequence::new(format!("sim-{seed}"), "simulated", sample_path(model, &mut rng))
        .expect("paths have one slot per step")
}

/// Per-step category counts over `n` simulated trajectories.
///
/// Trajectory `i` always uses stream `i` of `seed`, so the counts do not depend
/// on how rayon schedules the work.
pub fn simulate_counts(model: &TransitionModel, n: usize, seed: u64) -> Result<Vec<[u64; NCAT]>> {
    if n == 0 {
        return Err(Error::InvalidN(n));
    }
    const CHUNK: usize = 256;
    let chunks = n.div_ceil(CHUNK);
    let counts = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut local = vec![[0u64; NCAT]; STEPS];
            for i in c * CHUNK..((c + 1) * CHUNK).min(n) {
                let mut rng = trajectory_rng(seed, i as u64);
                for (t, cat) in sample_path(model, &mut rng).into_iter().enumerate() {
                    local[t][cat.index()] += 1;
                }
            }
            local
        })
        .reduce(
            || vec![[0u64; NCAT]; STEPS],
            |mut a, b| {
                for (ra, rb) in a.iter_mut().zip(&b) {
                    for (x, y) in ra.iter_mut().zip(rb) {
                        *x += y;
                    }
                }
                a
            },
        );
    Ok(counts)
}

/// Normalizes per-step counts into compositions, `a_t / (a_t + b_t + ...)`.
pub fn counts_to_composition(counts: &[[u64; NCAT]]) -> Result<CompositionMatrix> {
    let rows = counts
        .iter()
        .map(|row| {
            let total: u64 = row.iter().sum();
            if total == 0 {
                return Err(Error::EmptyInput("step with no observations".into()));
            }
            let mut out = [0.0; NCAT];
            for (o, &c) in out.iter_mut().zip(row) {
                *o = c as f64 / total as f64;
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;
    CompositionMatrix::new(rows)
}

/// Default replacement value `min(1 / (2n), 1e-4)` for `n` simulated trajectories.
pub fn default_epsilon(n: usize) -> f64 {
    (0.5 / n as f64).min(1e-4)
}

/// Simulated profile with the default zero-replacement epsilon.
pub fn simulate_profile(model: &TransitionModel, n: usize, seed: u64) -> Result<CompositionMatrix> {
    simulate_profile_with(model, n, seed, default_epsilon(n.max(1)))
}

/// Simulates `n` trajectories, normalizes per step, then replaces zeros with `epsilon`.
pub fn simulate_profile_with(model: &TransitionModel, n: usize, seed: u64, epsilon: f64) -> Result<CompositionMatrix> {
    let counts = simulate_counts(model, n, seed)?;
    zero_replace(&counts_to_composition(&counts)?, epsilon)
}

/// Multiplicative zero replacement: zeros become `epsilon`, the other cells
/// of the row are scaled by `1 - z·epsilon` where `z` counts the zeros.
pub fn zero_replace(matrix: &CompositionMatrix, epsilon: f64) -> Result<CompositionMatrix> {
    if !(epsilon > 0.0 && epsilon < 1.0 / 16.0) {
        return Err(Error::EpsilonOutOfRange(epsilon));
    }
    let rows = matrix.rows().iter().map(|row| replace_row(row, epsilon)).collect();
    CompositionMatrix::new(rows)
}

pub(crate) fn replace_row(row: &Composition, epsilon: f64) -> Composition {
    let zeros = row.iter().filter(|v| **v == 0.0).count();
    if zeros == 0 {
        return *row;
    }
    let scale = 1.0 - zeros as f64 * epsilon;
    let mut out = *row;
    for v in out.iter_mut() {
        *v = if *v == 0.0 { epsilon } else { *v * scale };
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use ActivityCategory::*;

    fn constant_diary(c: ActivityCategory) -> ActivitySequence {
        ActivitySequence::new("p", "x", vec![c; STEPS]).unwrap()
    }

    fn identity_model(initial: Composition) -> TransitionModel {
        let mut id = [[0.0; NCAT]; NCAT];
        for (i, row) in id.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        TransitionModel::new(initial, vec![id; STEPS - 1], 0.0).unwrap()
    }

    fn unit(c: ActivityCategory) -> Composition {
        let mut v = [0.0; NCAT];
        v[c.index()] = 1.0;
        v
    }

    #[test]
    fn constant_diaries_absorb() {
        let m = estimate_transitions(&[constant_diary(C02), constant_diary(C02)], 0.0).unwrap();
        assert_eq!(*m.initial(), unit(C02));
        for mat in m.matrices() {
            for (p, row) in mat.iter().enumerate() {
                if p == C02.index() {
                    assert_eq!(*row, unit(C02));
                } else {
                    assert!(row.iter().all(|v| *v == 0.125));
                }
            }
        }
    }

    #[test]
    fn hand_counted_transitions() {
        let mut a = vec![C02; STEPS];
        let mut b = vec![C02; STEPS];
        a[10] = C02;
        b[10] = C05;
        b[11..].fill(C05);
        let d = [ActivitySequence::new("a", "x", a).unwrap(), ActivitySequence::new("b", "x", b).unwrap()];
        let m = estimate_transitions(&d, 0.0).unwrap();
        let row = m.transition(10)[C02.index()];
        assert_eq!(row[C02.index()], 0.5);
        assert_eq!(row[C05.index()], 0.5);
        assert_eq!(row.iter().sum::<f64>(), 1.0);
    }

    #[test]
    fn laplace_smoothing_two_category_reduction() {
        // counts (1, 0) with κ = 0.5 over two categories
        let kappa = 0.5;
        let (c1, c2) = (1.0, 0.0);
        let denom = c1 + c2 + 2.0 * kappa;
        assert_eq!(((c1 + kappa) / denom, (c2 + kappa) / denom), (0.75, 0.25));
        // the same rule over eight categories
        let m = estimate_transitions(&[constant_diary(C01)], kappa).unwrap();
        assert_eq!(m.initial()[0], 1.5 / 5.0);
        assert_eq!(m.initial()[1], 0.5 / 5.0);
    }

    #[test]
    fn empty_input_rejected() {
        assert!(matches!(estimate_transitions(&[], 0.5), Err(Error::EmptyInput(_))));
    }

    #[test]
    fn identity_chain_profile() {
        let p = analytic_profile(&identity_model(unit(C02)));
        assert!(p.rows().iter().all(|r| *r == unit(C02)));
    }

    #[test]
    fn two_state_propagation() {
        let mut m = [[0.0; NCAT]; NCAT];
        m[0][0] = 0.5;
        m[0][1] = 0.5;
        m[1][1] = 1.0;
        for (i, row) in m.iter_mut().enumerate().skip(2) {
            row[i] = 1.0;
        }
        let model = TransitionModel::new(unit(C01), vec![m; STEPS - 1], 0.0).unwrap();
        let p = analytic_profile(&model);
        assert_eq!(p.step(2)[..2], [0.5, 0.5]);
        assert_eq!(p.step(3)[..2], [0.25, 0.75]);
    }

    #[test]
    fn degenerate_model_simulates_constant() {
        let model = identity_model(unit(C02));
        for seed in [0, 1, 99] {
            assert!(simulate_trajectory(&model, seed).slots().iter().all(|&c| c == C02));
        }
    }

    #[test]
    fn fig2_normalization() {
        let mut counts = vec![[0u64; NCAT]; STEPS];
        for row in counts.iter_mut() {
            row[0] = 2;
            row[1] = 3;
            row[2] = 5;
        }
        let c = counts_to_composition(&counts).unwrap();
        assert_eq!(c.step(1)[..3], [0.2, 0.3, 0.5]);
    }

    #[test]
    fn identity_chain_counts() {
        let counts = simulate_counts(&identity_model(unit(C02)), 17, 3).unwrap();
        assert!(counts.iter().all(|r| r[C02.index()] == 17));
        assert!(matches!(simulate_counts(&identity_model(unit(C02)), 0, 3), Err(Error::InvalidN(0))));
    }

    #[test]
    fn zero_replace_examples() {
        let mut rows = vec![[0.125; NCAT]; STEPS];
        rows[0] = unit(C01);
        let m = CompositionMatrix::new(rows).unwrap();
        let r = zero_replace(&m, 0.001).unwrap();
        assert!((r.step(1)[0] - 0.993).abs() < 1e-15);
        assert!(r.step(1)[1..].iter().all(|v| *v == 0.001));
        assert_eq!(r.step(2), m.step(2));
        assert!(r.rows().iter().all(|row| (row.iter().sum::<f64>() - 1.0).abs() < 1e-12));
        assert!(r.is_strictly_positive());
        assert!(matches!(zero_replace(&m, 0.0), Err(Error::EpsilonOutOfRange(_))));
        assert!(matches!(zero_replace(&m, 0.0625), Err(Error::EpsilonOutOfRange(_))));
    }

    #[test]
    fn default_epsilon_capped() {
        assert_eq!(default_epsilon(10), 1e-4);
        assert_eq!(default_epsilon(10_000), 5e-5);
    }

    #[test]
    fn json_rejects_non_stochastic() {
        let m = identity_model(unit(C03));
        let json = m.to_json().unwrap();
        assert_eq!(TransitionModel::from_json(&json).unwrap(), m);
        let broken = json.replacen("1.0", "0.9", 1);
        assert!(TransitionModel::from_json(&broken).is_err());
    }
}
