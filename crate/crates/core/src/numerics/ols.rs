//! Ordinary least squares with classical inference.
//!
//! Solved by Householder QR so that rank deficiency shows up as a vanishing
//! diagonal of `R` instead of a silently ill-conditioned normal system.

use serde::Serialize;

use super::special::two_sided_p;
use crate::error::{Error, Result};

/// Relative threshold on `|R_jj|` below which a column counts as dependent.
const RANK_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OlsFit {
    /// Intercept first when the design has one.
    pub coefficients: Vec<f64>,
    pub r_squared: f64,
    pub std_errors: Vec<f64>,
    pub t_stats: Vec<f64>,
    pub p_values: Vec<f64>,
    pub n_obs: usize,
    pub residuals: Vec<f64>,
}

impl OlsFit {
    pub fn df_resid(&self) -> usize {
        self.n_obs - self.coefficients.len()
    }

    pub fn predict(&self, row: &[f64]) -> f64 {
        self.coefficients.iter().zip(row).map(|(b, x)| b * x).sum()
    }
}

/// Fits `response ~ design`. Each design row must carry its own intercept
/// column (conventionally a leading 1).
pub fn ols_fit(design: &[Vec<f64>], response: &[f64]) -> Result<OlsFit> {
    let n = design.len();
    if n != response.len() {
        return Err(Error::Domain(format!("design has {n} rows, response {}", response.len())));
    }
    let k = design.first().map_or(0, Vec::len);
    if k == 0 {
        return Err(Error::Domain("design has no columns".into()));
    }
    if design.iter().any(|r| r.len() != k) {
        return Err(Error::Domain("ragged design matrix".into()));
    }
    if n <= k {
        return Err(Error::SampleSize { n_obs: n, n_params: k });
    }
    if design.iter().flatten().chain(response).any(|v| !v.is_finite()) {
        return Err(Error::Domain("non-finite value in regression input".into()));
    }

    // Column-major working copy.
    let mut a: Vec<Vec<f64>> = (0..k).map(|j| design.iter().map(|r| r[j]).collect()).collect();
    let col_scale = a
        .iter()
        .map(|c| c.iter().map(|x| x * x).sum::<f64>().sqrt())
        .fold(0.0, f64::max);
    let mut qty = response.to_vec();
    let mut rank = 0;

    for j in 0..k {
        let norm = a[j][j..].iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm <= RANK_TOL * col_scale.max(f64::MIN_POSITIVE) {
            continue;
        }
        rank += 1;
        let alpha = if a[j][j] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = a[j][j..].to_vec();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|x| x * x).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        let reflect = |col: &mut [f64]| {
            let dot: f64 = v.iter().zip(col.iter()).map(|(a, b)| a * b).sum();
            let f = 2.0 * dot / vnorm2;
            for (c, vi) in col.iter_mut().zip(&v) {
                *c -= f * vi;
            }
        };
        for col in a.iter_mut().skip(j) {
            reflect(&mut col[j..]);
        }
        reflect(&mut qty[j..]);
    }

    let diag_max = (0..k).map(|j| a[j][j].abs()).fold(0.0, f64::max);
    let dependent = (0..k).any(|j| a[j][j].abs() <= RANK_TOL * diag_max.max(f64::MIN_POSITIVE));
    if rank < k || dependent {
        return Err(Error::SingularDesign { rank: rank.min(k - 1), columns: k });
    }

    // R is a[j][i] for i <= j (column j, row i).
    let r = |i: usize, j: usize| a[j][i];
    let mut beta = vec![0.0; k];
    for i in (0..k).rev() {
        let s: f64 = ((i + 1)..k).map(|j| r(i, j) * beta[j]).sum();
        beta[i] = (qty[i] - s) / r(i, i);
    }

    // R^{-1}, upper triangular.
    let mut rinv = vec![vec![0.0; k]; k];
    for c in 0..k {
        for i in (0..=c).rev() {
            let rhs = if i == c { 1.0 } else { 0.0 };
            let s: f64 = ((i + 1)..=c).map(|j| r(i, j) * rinv[j][c]).sum();
            rinv[i][c] = (rhs - s) / r(i, i);
        }
    }

    let residuals: Vec<f64> = design
        .iter()
        .zip(response)
        .map(|(row, y)| y - row.iter().zip(&beta).map(|(x, b)| x * b).sum::<f64>())
        .collect();
    let sse: f64 = residuals.iter().map(|e| e * e).sum();
    let ybar = response.iter().sum::<f64>() / n as f64;
    let sst: f64 = response.iter().map(|y| (y - ybar).powi(2)).sum();
    let r_squared = if sst > 0.0 { (1.0 - sse / sst).clamp(0.0, 1.0) } else { 0.0 };

    let df = n - k;
    let sigma2 = sse / df as f64;
    let std_errors: Vec<f64> = (0..k)
        .map(|i| (sigma2 * rinv[i].iter().map(|x| x * x).sum::<f64>()).sqrt())
        .collect();
    let t_stats: Vec<f64> = beta
        .iter()
        .zip(&std_errors)
        .map(|(b, se)| match (*se > 0.0, *b == 0.0) {
            (true, _) => b / se,
            (false, true) => 0.0,
            (false, false) => b.signum() * f64::INFINITY,
        })
        .collect();
    let p_values = t_stats.iter().map(|&t| two_sided_p(t, df as u32)).collect();

    Ok(OlsFit { coefficients: beta, r_squared, std_errors, t_stats, p_values, n_obs: n, residuals })
}
