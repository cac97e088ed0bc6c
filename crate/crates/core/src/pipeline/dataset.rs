//! Regression dataset: one observation per (community, time step).

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::activity::{CommunityCovariates, Composition, CompositionMatrix, TimeGrid};
use crate::error::{Error, Result};
use crate::regression::{DesignRow, Standardization};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Observation {
    pub community_id: String,
    /// 1-based time step.
    pub step: usize,
    pub time_sq: f64,
    /// Unstandardized covariates, ordered like [`Dataset::covariate_names`].
    pub raw: Vec<f64>,
    pub y: Composition,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub covariate_names: Vec<String>,
    pub rows: Vec<Observation>,
}

/// Crosses each community profile with its covariates, community-major.
pub fn build_dataset(
    profiles: &[(String, CompositionMatrix)],
    covariates: &[CommunityCovariates],
    covariate_names: &[String],
    grid: &TimeGrid,
) -> Result<Dataset> {
    let mut rows = Vec::with_capacity(profiles.len() * grid.steps);
    for (cid, profile) in profiles {
        let cov = covariates.iter().find(|c| &c.community_id == cid);
        let raw = covariate_names
            .iter()
            .map(|f| {
                cov.and_then(|c| c.get(f))
                    .ok_or_else(|| Error::MissingCovariate { community: cid.clone(), field: f.clone() })
            })
            .collect::<Result<Vec<f64>>>()?;
        for (i, y) in profile.rows().iter().enumerate() {
            let step = i + 1;
            rows.push(Observation {
                community_id: cid.clone(),
                step,
                time_sq: grid.time_sq(step),
                raw: raw.clone(),
                y: *y,
            });
        }
    }
    Ok(Dataset { covariate_names: covariate_names.to_vec(), rows })
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Communities in order of first appearance.
    pub fn communities(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for r in &self.rows {
            if out.last() != Some(&r.community_id) && !out.contains(&r.community_id) {
                out.push(r.community_id.clone());
            }
        }
        out
    }

    /// z-score parameters of the covariates over the rows `idx`.
    pub fn standardization(&self, idx: &[usize]) -> Result<Standardization> {
        let raw: Vec<Vec<f64>> = idx.iter().map(|&i| self.rows[i].raw.clone()).collect();
        Standardization::from_rows(&self.covariate_names, &raw)
    }

    pub fn design(&self, idx: &[usize], std: &Standardization) -> Result<Vec<DesignRow>> {
        idx.iter().map(|&i| DesignRow::from_raw(self.rows[i].time_sq, &self.rows[i].raw, std)).collect()
    }

    pub fn responses(&self, idx: &[usize]) -> Vec<Composition> {
        idx.iter().map(|&i| self.rows[i].y).collect()
    }

    /// Raw column of covariate `name` over all rows.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.covariate_names.iter().position(|n| n == name)?;
        Some(self.rows.iter().map(|r| r.raw[j]).collect())
    }
}

/// Train and test row indices, each ascending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Split {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

/// Seeded split stratified by community. Training quotas follow the
/// largest-remainder rule on `fraction * n_c`, ties going to the earlier
/// community, so the total is `round(fraction * n)`. Community `c` shuffles
/// its rows with ChaCha stream `c` of `seed`.
pub fn split_train_test(dataset: &Dataset, fraction: f64, seed: u64) -> Result<Split> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(Error::Config(format!("split fraction {fraction} outside (0, 1)")));
    }
    let communities = dataset.communities();
    let members: Vec<Vec<usize>> = communities
        .iter()
        .map(|c| (0..dataset.len()).filter(|&i| &dataset.rows[i].community_id == c).collect())
        .collect();
    let exact: Vec<f64> = members.iter().map(|m| fraction * m.len() as f64).collect();
    let mut quota: Vec<usize> = exact.iter().map(|q| q.floor() as usize).collect();
    let target = (fraction * dataset.len() as f64).round() as usize;
    let mut order: Vec<usize> = (0..members.len()).collect();
    order.sort_by(|&a, &b| {
        let (ra, rb) = (exact[a] - exact[a].floor(), exact[b] - exact[b].floor());
        rb.total_cmp(&ra).then(a.cmp(&b))
    });
    let mut remaining = target.saturating_sub(quota.iter().sum());
    for &c in order.iter().cycle().take(order.len() * 2) {
        if remaining == 0 {
            break;
        }
        if quota[c] < members[c].len() {
            quota[c] += 1;
            remaining -= 1;
        }
    }

    let mut train = Vec::new();
    let mut test = Vec::new();
    for (c, rows) in members.iter().enumerate() {
        let mut shuffled = rows.clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(c as u64);
        shuffled.shuffle(&mut rng);
        train.extend_from_slice(&shuffled[..quota[c]]);
        test.extend_from_slice(&shuffled[quota[c]..]);
    }
    train.sort_unstable();
    test.sort_unstable();
    Ok(Split { train, test })
}
