use serde::{Deserialize, Serialize};

use crate::activity::CommunityCovariates;
use crate::error::{Error, Result};

/// Pearson correlation. `None` when either input has zero variance.
pub fn pearson(a: &[f64], b: &[f64]) -> Option<f64> {
    let n = a.len() as f64;
    let (ma, mb) = (a.iter().sum::<f64>() / n, b.iter().sum::<f64>() / n);
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        let (dx, dy) = (x - ma, y - mb);
        sab += dx * dy;
        saa += dx * dx;
        sbb += dy * dy;
    }
    (saa > 0.0 && sbb > 0.0).then(|| (sab / (saa * sbb).sqrt()).clamp(-1.0, 1.0))
}

/// Symmetric correlation matrix with unit diagonal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationMatrix {
    pub fields: Vec<String>,
    pub values: Vec<Vec<f64>>,
}

impl CorrelationMatrix {
    /// Correlations between named columns of equal length.
    pub fn from_columns(fields: &[String], columns: &[Vec<f64>]) -> Result<Self> {
        let n = columns.first().map_or(0, Vec::len);
        if n < 3 {
            return Err(Error::TooFewPoints { needed: 3, got: n });
        }
        let k = fields.len();
        let mut values = vec![vec![0.0; k]; k];
        for i in 0..k {
            if pearson(&columns[i], &columns[i]).is_none() {
                return Err(Error::ZeroVariance(fields[i].clone()));
            }
            values[i][i] = 1.0;
            for j in 0..i {
                let r = pearson(&columns[i], &columns[j]).ok_or_else(|| Error::ZeroVariance(fields[j].clone()))?;
                values[i][j] = r;
                values[j][i] = r;
            }
        }
        Ok(CorrelationMatrix { fields: fields.to_vec(), values })
    }

    pub fn get(&self, a: &str, b: &str) -> Option<f64> {
        let i = self.fields.iter().position(|f| f == a)?;
        let j = self.fields.iter().position(|f| f == b)?;
        Some(self.values[i][j])
    }

    /// Off-diagonal pair with the largest `|r|`, first in row-major order on ties.
    pub fn worst_pair(&self) -> Option<(usize, usize, f64)> {
        let mut best: Option<(usize, usize, f64)> = None;
        for i in 0..self.fields.len() {
            for j in i + 1..self.fields.len() {
                let r = self.values[i][j];
                if best.is_none_or(|b| r.abs() > b.2.abs()) {
                    best = Some((i, j, r));
                }
            }
        }
        best
    }

    /// CSV with a leading label column and short field labels.
    pub fn to_csv(&self) -> String {
        let labels: Vec<&str> = self.fields.iter().map(|f| CommunityCovariates::short_label(f)).collect();
        let mut s = String::from("variable");
        for l in &labels {
            s.push(',');
            s.push_str(l);
        }
        s.push('\n');
        for (l, row) in labels.iter().zip(&self.values) {
            s.push_str(l);
            for v in row {
                s.push(',');
                s.push_str(&v.to_string());
            }
            s.push('\n');
        }
        s
    }
}

/// Pearson correlations of the named covariate fields across communities.
pub fn correlation_matrix(covariates: &[CommunityCovariates], fields: &[&str]) -> Result<CorrelationMatrix> {
    let columns = fields
        .iter()
        .map(|f| {
            covariates
                .iter()
                .map(|c| c.get(f).ok_or_else(|| Error::InvalidInput(format!("unknown covariate field `{f}`"))))
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let names: Vec<String> = fields.iter().map(|f| f.to_string()).collect();
    CorrelationMatrix::from_columns(&names, &columns)
}
