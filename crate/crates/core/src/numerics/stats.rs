//! Correlation and rolling-window statistics.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::series::TimeSeries;

/// Pearson correlation with a flag for the zero-variance convention.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Correlation {
    pub value: f64,
    /// Set when either input had zero variance; `value` is then 0.
    pub degenerate: bool,
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample variance (divisor `n - 1`), two-pass.
pub fn sample_variance(xs: &[f64]) -> f64 {
    let m = mean(xs);
    xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64
}

/// Root mean square with divisor `n`.
pub fn rms(xs: &[f64]) -> f64 {
    (xs.iter().map(|x| x * x).sum::<f64>() / xs.len() as f64).sqrt()
}

pub fn pearson_corr(x: &[f64], y: &[f64]) -> Result<Correlation> {
    if x.len() != y.len() {
        return Err(Error::Domain(format!("correlation of lengths {} and {}", x.len(), y.len())));
    }
    if x.len() < 2 {
        return Err(Error::Domain("correlation needs at least two points".into()));
    }
    let (mx, my) = (mean(x), mean(y));
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    // Spread relative to magnitude; catches constants that pick up
    // rounding noise in the mean.
    let flat = |ss: f64, m: f64, v: &[f64]| {
        let scale = v.iter().fold(m.abs(), |acc, x| acc.max(x.abs()));
        ss.sqrt() <= 1e-14 * scale * (v.len() as f64).sqrt() || ss == 0.0
    };
    if flat(sxx, mx, x) || flat(syy, my, y) {
        return Ok(Correlation { value: 0.0, degenerate: true });
    }
    let r = sxy / (sxx.sqrt() * syy.sqrt());
    Ok(Correlation { value: r.clamp(-1.0, 1.0), degenerate: false })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RollingKind {
    /// Sample variance, divisor `window - 1`.
    Variance,
    /// `sqrt(mean of squares)`, divisor `window`.
    Rms,
    Mean,
}

/// Trailing-window statistic; a year gets a value only when all
/// `window` slots ending there are present.
pub fn rolling_stat(series: &TimeSeries, window: usize, kind: RollingKind) -> Result<TimeSeries> {
    let min = if kind == RollingKind::Variance { 2 } else { 1 };
    if window < min {
        return Err(Error::Domain(format!("{kind:?} window must be at least {min}, got {window}")));
    }
    let values = (0..series.len())
        .map(|i| {
            series.window(i, window).map(|w| match kind {
                RollingKind::Variance => sample_variance(&w),
                RollingKind::Rms => rms(&w),
                RollingKind::Mean => mean(&w),
            })
        })
        .collect();
    TimeSeries::new(series.years().to_vec(), values)
}

/// Trailing-window Pearson correlation of two aligned series.
#[derive(Debug, Clone, PartialEq)]
pub struct RollingCorrelation {
    pub values: TimeSeries,
    /// Per slot: a complete window existed but had zero variance.
    pub degenerate: Vec<bool>,
}

pub fn rolling_corr(x: &TimeSeries, y: &TimeSeries, window: usize) -> Result<RollingCorrelation> {
    if x.years() != y.years() {
        return Err(Error::Domain("rolling correlation needs aligned series".into()));
    }
    if window < 3 {
        return Err(Error::Domain(format!("correlation window must be at least 3, got {window}")));
    }
    let mut values = Vec::with_capacity(x.len());
    let mut degenerate = Vec::with_capacity(x.len());
    for i in 0..x.len() {
        match (x.window(i, window), y.window(i, window)) {
            (Some(a), Some(b)) => {
                let c = pearson_corr(&a, &b)?;
                values.push(Some(c.value));
                degenerate.push(c.degenerate);
            }
            _ => {
                values.push(None);
                degenerate.push(false);
            }
        }
    }
    Ok(RollingCorrelation { values: TimeSeries::new(x.years().to_vec(), values)?, degenerate })
}
