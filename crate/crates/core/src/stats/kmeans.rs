//! k-means clustering of diaries on a three-state day encoding.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::activity::{ActivityCategory, ActivitySequence, STEPS};
use crate::error::{Error, Result};

/// Coarse day state used for clustering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DayState {
    HomeActive,
    Sleep,
    Out,
}

impl DayState {
    pub const ALL: [DayState; 3] = [DayState::HomeActive, DayState::Sleep, DayState::Out];

    /// Position in the one-hot block: home-active, sleep, out.
    pub fn index(self) -> usize {
        self as usize
    }
}

/// Category to day-state reduction. May be partial; encoding a diary that
/// visits an unmapped category fails.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionMap(BTreeMap<ActivityCategory, DayState>);

impl Default for ReductionMap {
    fn default() -> Self {
        use ActivityCategory::*;
        ReductionMap(BTreeMap::from([
            (C01, DayState::HomeActive),
            (C02, DayState::Sleep),
            (C03, DayState::HomeActive),
            (C04, DayState::Out),
            (C05, DayState::Out),
            (C06, DayState::Out),
            (C07, DayState::HomeActive),
            (C08, DayState::Out),
        ]))
    }
}

impl ReductionMap {
    pub fn new(map: BTreeMap<ActivityCategory, DayState>) -> Self {
        ReductionMap(map)
    }

    pub fn get(&self, c: ActivityCategory) -> Result<DayState> {
        self.0.get(&c).copied().ok_or_else(|| Error::UnmappedCategory(c.code().to_string()))
    }

    pub fn entries(&self) -> impl Iterator<Item = (ActivityCategory, DayState)> + '_ {
        self.0.iter().map(|(c, s)| (*c, *s))
    }
}

/// One-hot three-state encoding per slot, flattened to `96 * 3` features.
pub fn encode_diary(seq: &ActivitySequence, map: &ReductionMap) -> Result<Vec<f64>> {
    let mut out = vec![0.0; STEPS * 3];
    for (t, c) in seq.slots().iter().enumerate() {
        out[t * 3 + map.get(*c)?.index()] = 1.0;
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterResult {
    /// Cluster index per point, 1-based.
    pub assignments: Vec<usize>,
    pub centroids: Vec<Vec<f64>>,
    pub inertia: f64,
    /// Fraction of points per cluster.
    pub shares: Vec<f64>,
    /// Restart that produced this result.
    pub restart: usize,
    /// Inertia after each Lloyd update of the winning restart.
    pub trace: Vec<f64>,
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Nearest centroid, ties to the lower index.
fn nearest(p: &[f64], centroids: &[Vec<f64>]) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (j, c) in centroids.iter().enumerate() {
        let d = sq_dist(p, c);
        if d < best.1 {
            best = (j, d);
        }
    }
    best
}

fn plus_plus_init(points: &[Vec<f64>], k: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let mut centroids = vec![points[rng.random_range(0..points.len())].clone()];
    let mut d2: Vec<f64> = points.iter().map(|p| sq_dist(p, &centroids[0])).collect();
    while centroids.len() < k {
        let total: f64 = d2.iter().sum();
        let idx = if total > 0.0 {
            let mut u = rng.random::<f64>() * total;
            let mut chosen = d2.iter().rposition(|d| *d > 0.0).unwrap_or(0);
            for (i, d) in d2.iter().enumerate() {
                if *d > 0.0 && u < *d {
                    chosen = i;
                    break;
                }
                u -= d;
            }
            chosen
        } else {
            rng.random_range(0..points.len())
        };
        let c = points[idx].clone();
        for (d, p) in d2.iter_mut().zip(points) {
            *d = d.min(sq_dist(p, &c));
        }
        centroids.push(c);
    }
    centroids
}

const MAX_LLOYD: usize = 1000;

fn lloyd(points: &[Vec<f64>], mut centroids: Vec<Vec<f64>>) -> (Vec<usize>, Vec<Vec<f64>>, f64, Vec<f64>) {
    let dim = points[0].len();
    let k = centroids.len();
    let mut assign: Vec<usize> = points.iter().map(|p| nearest(p, &centroids).0).collect();
    let mut trace = Vec::new();
    for _ in 0..MAX_LLOYD {
        let mut sums = vec![vec![0.0; dim]; k];
        let mut counts = vec![0usize; k];
        for (p, &a) in points.iter().zip(&assign) {
            counts[a] += 1;
            for (s, v) in sums[a].iter_mut().zip(p) {
                *s += v;
            }
        }
        for j in 0..k {
            // empty clusters keep their centroid
            if counts[j] > 0 {
                centroids[j] = sums[j].iter().map(|s| s / counts[j] as f64).collect();
            }
        }
        trace.push(points.iter().zip(&assign).map(|(p, &a)| sq_dist(p, &centroids[a])).sum());
        let next: Vec<usize> = points.iter().map(|p| nearest(p, &centroids).0).collect();
        if next == assign {
            break;
        }
        assign = next;
    }
    let inertia = *trace.last().expect("at least one Lloyd update");
    (assign, centroids, inertia, trace)
}

/// k-means++ seeding and Lloyd iterations, best of `restarts` runs by
/// `(inertia, restart index)`. Restart `r` draws from ChaCha stream `r` of `seed`.
pub fn kmeans(points: &[Vec<f64>], k: usize, seed: u64, restarts: usize) -> Result<ClusterResult> {
    if k == 0 || points.len() < k {
        return Err(Error::TooFewPoints { needed: k.max(1), got: points.len() });
    }
    let dim = points[0].len();
    if points.iter().any(|p| p.len() != dim) {
        return Err(Error::InvalidInput("points have differing dimensions".into()));
    }
    let runs: Vec<_> = (0..restarts.max(1))
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(r as u64);
            let init = plus_plus_init(points, k, &mut rng);
            (r, lloyd(points, init))
        })
        .collect();
    let (restart, (assign, centroids, inertia, trace)) =
        runs.into_iter().min_by(|a, b| a.1 .2.total_cmp(&b.1 .2).then(a.0.cmp(&b.0))).expect("at least one restart");
    let mut shares = vec![0.0; k];
    for &a in &assign {
        shares[a] += 1.0;
    }
    let n = points.len() as f64;
    shares.iter_mut().for_each(|s| *s /= n);
    Ok(ClusterResult {
        assignments: assign.iter().map(|a| a + 1).collect(),
        centroids,
        inertia,
        shares,
        restart,
        trace,
    })
}
