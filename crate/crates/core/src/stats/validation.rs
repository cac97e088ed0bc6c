//! Two-group validation: Box's M for covariance homogeneity and Welch t-tests
//! per activity category.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF, StudentsT};

use crate::activity::{ActivityCategory, Composition, NCAT};
use crate::error::{Error, Result};

/// Diagonal ridge added to every covariance matrix when any is singular.
pub const BOXM_RIDGE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxM {
    pub m: f64,
    /// `M (1 - c)`. Negative when the correction exceeds 1, which happens
    /// when the dimension is large relative to the group sizes.
    pub chi2: f64,
    pub df: usize,
    /// Upper χ² tail at `max(chi2, 0)`.
    pub p: f64,
    /// Box correction `c`.
    pub correction: f64,
    pub dim: usize,
    pub group_sizes: [usize; 2],
    /// At least one covariance matrix was singular and the ridge was applied.
    pub singular: bool,
    pub ridge: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TTestResult {
    pub category: ActivityCategory,
    pub t: f64,
    pub df: f64,
    pub p: f64,
    pub mean_a: f64,
    pub mean_b: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestReport {
    pub boxm: BoxM,
    pub ttests: Vec<TTestResult>,
}

fn covariance(obs: &[Vec<f64>]) -> DMatrix<f64> {
    let n = obs.len();
    let d = obs[0].len();
    let mut mean = vec![0.0; d];
    for o in obs {
        for (m, v) in mean.iter_mut().zip(o) {
            *m += v / n as f64;
        }
    }
    let centred = DMatrix::from_fn(n, d, |i, j| obs[i][j] - mean[j]);
    (centred.transpose() * &centred) / (n as f64 - 1.0)
}

/// `ln |S|` by Cholesky, `None` if `S` is not numerically positive definite.
fn log_det_pd(s: &DMatrix<f64>) -> Option<f64> {
    let chol = s.clone().cholesky()?;
    let ld = 2.0 * chol.l_dirty().diagonal().iter().map(|v| v.ln()).sum::<f64>();
    ld.is_finite().then_some(ld)
}

/// Log-determinant after adding the ridge, with an eigenvalue fallback.
fn log_det_ridged(s: &DMatrix<f64>, ridge: f64) -> f64 {
    let r = s + DMatrix::identity(s.nrows(), s.ncols()) * ridge;
    log_det_pd(&r).unwrap_or_else(|| SymmetricEigen::new(r).eigenvalues.iter().map(|l| l.max(ridge).ln()).sum())
}

/// Box's M test of equal covariance matrices for two groups of `D`-vectors.
pub fn boxs_m_test(group_a: &[Vec<f64>], group_b: &[Vec<f64>]) -> Result<BoxM> {
    for (g, grp) in [group_a, group_b].iter().enumerate() {
        if grp.len() < 2 {
            return Err(Error::DegenerateGroup { group: g + 1, n: grp.len() });
        }
    }
    let dim = group_a[0].len();
    if dim == 0 || group_a.iter().chain(group_b).any(|o| o.len() != dim) {
        return Err(Error::InvalidInput("Box's M observations must share one positive dimension".into()));
    }
    let (na, nb) = (group_a.len() as f64, group_b.len() as f64);
    let g = 2.0;
    let big_n = na + nb;
    let sa = covariance(group_a);
    let sb = covariance(group_b);
    let sp = (&sa * (na - 1.0) + &sb * (nb - 1.0)) / (big_n - g);

    let exact = [&sp, &sa, &sb].map(log_det_pd);
    let singular = exact.iter().any(Option::is_none);
    let [lp, la, lb] = if singular {
        [&sp, &sa, &sb].map(|s| log_det_ridged(s, BOXM_RIDGE))
    } else {
        exact.map(|v| v.expect("checked"))
    };

    let m = (big_n - g) * lp - (na - 1.0) * la - (nb - 1.0) * lb;
    let d = dim as f64;
    let correction = (2.0 * d * d + 3.0 * d - 1.0) / (6.0 * (d + 1.0) * (g - 1.0))
        * (1.0 / (na - 1.0) + 1.0 / (nb - 1.0) - 1.0 / (big_n - g));
    let chi2 = m * (1.0 - correction);
    let df = dim * (dim + 1) / 2;
    let p = if chi2 > 0.0 { ChiSquared::new(df as f64).expect("df > 0").sf(chi2) } else { 1.0 };
    Ok(BoxM {
        m,
        chi2,
        df,
        p,
        correction,
        dim,
        group_sizes: [group_a.len(), group_b.len()],
        singular,
        ridge: if singular { BOXM_RIDGE } else { 0.0 },
    })
}

/// Welch two-sample t-test: `(t, df, two-sided p)`.
pub fn welch_t_test(a: &[f64], b: &[f64]) -> Result<(f64, f64, f64)> {
    for (g, s) in [a, b].iter().enumerate() {
        if s.len() < 2 {
            return Err(Error::DegenerateGroup { group: g + 1, n: s.len() });
        }
    }
    let stats = |s: &[f64]| {
        let n = s.len() as f64;
        let m = s.iter().sum::<f64>() / n;
        let v = s.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
        (n, m, v / n)
    };
    let (na, ma, qa) = stats(a);
    let (nb, mb, qb) = stats(b);
    let se2 = qa + qb;
    if se2 == 0.0 {
        return Ok(if ma == mb { (0.0, f64::NAN, 1.0) } else { ((ma - mb).signum() * f64::INFINITY, f64::NAN, 0.0) });
    }
    let t = (ma - mb) / se2.sqrt();
    let df = se2 * se2 / (qa * qa / (na - 1.0) + qb * qb / (nb - 1.0));
    let p = if t == 0.0 {
        1.0
    } else {
        let dist = StudentsT::new(0.0, 1.0, df).map_err(|e| Error::InvalidInput(e.to_string()))?;
        (2.0 * dist.sf(t.abs())).min(1.0)
    };
    Ok((t, df, p))
}

/// Welch t-test per category on the per-step shares of two trajectories.
pub fn t_test_per_component(group_a: &[Composition], group_b: &[Composition]) -> Result<Vec<TTestResult>> {
    ActivityCategory::ALL
        .iter()
        .map(|&c| {
            let a: Vec<f64> = group_a.iter().map(|r| r[c.index()]).collect();
            let b: Vec<f64> = group_b.iter().map(|r| r[c.index()]).collect();
            let (t, df, p) = welch_t_test(&a, &b)?;
            Ok(TTestResult {
                category: c,
                t,
                df,
                p,
                mean_a: a.iter().sum::<f64>() / a.len() as f64,
                mean_b: b.iter().sum::<f64>() / b.len() as f64,
            })
        })
        .collect()
}

/// Per-category trajectories: observation `d` holds category `d`'s share at every row.
pub fn category_trajectories(rows: &[Composition]) -> Vec<Vec<f64>> {
    (0..NCAT).map(|d| rows.iter().map(|r| r[d]).collect()).collect()
}

/// Box's M across trajectories (observations = categories, variables = rows)
/// plus per-category t-tests.
pub fn validate_trajectories(observed: &[Composition], predicted: &[Composition]) -> Result<TestReport> {
    Ok(TestReport {
        boxm: boxs_m_test(&category_trajectories(observed), &category_trajectories(predicted))?,
        ttests: t_test_per_component(observed, predicted)?,
    })
}
