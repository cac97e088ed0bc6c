//! Correlation filtering of candidate covariates by AIC.

use serde::{Deserialize, Serialize};

use crate::activity::Composition;
use crate::error::{Error, Result};
use crate::regression::{fit_regression, DesignRow, FitOptions, Standardization};
use crate::stats::correlation::CorrelationMatrix;

/// Name of the squared-time regressor. It is always in the model.
pub const TIME_SQ: &str = "time_sq";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionStep {
    pub pair: [String; 2],
    pub r: f64,
    /// AIC of the fit without each pair member; `None` when that member is fixed.
    pub aic_without: [Option<f64>; 2],
    pub dropped: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Selection {
    /// Surviving regressors, `time_sq` first, then candidates in input order.
    pub kept: Vec<String>,
    pub dropped: Vec<String>,
    pub fixed: Vec<String>,
    pub threshold: f64,
    pub steps: Vec<SelectionStep>,
    /// Correlations of all regressors before filtering.
    pub correlation: CorrelationMatrix,
}

/// AICs within this relative distance count as tied; the later candidate is dropped.
const AIC_TIE: f64 = 1e-6;

fn fit_aic(time_sq: &[f64], columns: &[&(String, Vec<f64>)], y: &[Composition], options: &FitOptions) -> Result<f64> {
    let names: Vec<String> = columns.iter().map(|c| c.0.clone()).collect();
    let raw: Vec<Vec<f64>> = (0..y.len()).map(|i| columns.iter().map(|c| c.1[i]).collect()).collect();
    let std = Standardization::from_rows(&names, &raw)?;
    let x = time_sq.iter().zip(&raw).map(|(t, r)| DesignRow::from_raw(*t, r, &std)).collect::<Result<Vec<_>>>()?;
    Ok(fit_regression(&x, y, &names, options)?.aic)
}

/// While some pair of regressors has `|r| > threshold`, takes the worst pair
/// and drops the member whose removal gives the lower AIC. Members of `fixed`
/// and `time_sq` are never dropped; a pair with one fixed member loses the
/// other, a pair of two fixed members is skipped.
pub fn select_variables(
    time_sq: &[f64],
    candidates: &[(String, Vec<f64>)],
    y: &[Composition],
    threshold: f64,
    fixed: &[String],
    options: &FitOptions,
) -> Result<Selection> {
    if !(threshold > 0.0 && threshold < 1.0) {
        return Err(Error::Config(format!("correlation threshold {threshold} outside (0, 1)")));
    }
    if time_sq.len() != y.len() || candidates.iter().any(|c| c.1.len() != y.len()) {
        return Err(Error::InvalidInput("candidate columns and responses differ in length".into()));
    }
    let is_fixed = |name: &str| name == TIME_SQ || fixed.iter().any(|f| f == name);
    for f in fixed {
        if f != TIME_SQ && !candidates.iter().any(|c| &c.0 == f) {
            return Err(Error::Config(format!("fixed variable `{f}` is not a candidate")));
        }
    }

    let time_col = (TIME_SQ.to_string(), time_sq.to_vec());
    let mut active: Vec<&(String, Vec<f64>)> = candidates.iter().collect();
    let matrix_of = |active: &[&(String, Vec<f64>)]| {
        let all: Vec<&(String, Vec<f64>)> = std::iter::once(&time_col).chain(active.iter().copied()).collect();
        let names: Vec<String> = all.iter().map(|c| c.0.clone()).collect();
        let cols: Vec<Vec<f64>> = all.iter().map(|c| c.1.clone()).collect();
        CorrelationMatrix::from_columns(&names, &cols)
    };
    let correlation = matrix_of(&active)?;
    let mut steps = Vec::new();
    let mut dropped = Vec::new();

    loop {
        let m = matrix_of(&active)?;
        let mut worst: Option<(usize, usize, f64)> = None;
        for i in 0..m.fields.len() {
            for j in i + 1..m.fields.len() {
                let r = m.values[i][j];
                if r.abs() > threshold
                    && !(is_fixed(&m.fields[i]) && is_fixed(&m.fields[j]))
                    && worst.is_none_or(|w| r.abs() > w.2.abs())
                {
                    worst = Some((i, j, r));
                }
            }
        }
        let Some((i, j, r)) = worst else { break };
        let pair = [m.fields[i].clone(), m.fields[j].clone()];
        let mut aic_without = [None, None];
        for (slot, name) in aic_without.iter_mut().zip(&pair) {
            if !is_fixed(name) {
                let rest: Vec<_> = active.iter().copied().filter(|c| &c.0 != name).collect();
                *slot = Some(fit_aic(time_sq, &rest, y, options)?);
            }
        }
        let victim = match aic_without {
            [Some(a), Some(b)] => {
                if (a - b).abs() <= AIC_TIE * a.abs().max(b.abs()).max(1.0) || b < a {
                    &pair[1]
                } else {
                    &pair[0]
                }
            }
            [None, _] => &pair[1],
            [_, None] => &pair[0],
        }
        .clone();
        active.retain(|c| c.0 != victim);
        dropped.push(victim.clone());
        steps.push(SelectionStep { pair, r, aic_without, dropped: victim });
    }

    let mut kept = vec![TIME_SQ.to_string()];
    kept.extend(active.iter().map(|c| c.0.clone()));
    let mut fixed_all = vec![TIME_SQ.to_string()];
    fixed_all.extend(fixed.iter().filter(|f| *f != TIME_SQ).cloned());
    Ok(Selection { kept, dropped, fixed: fixed_all, threshold, steps, correlation })
}
