//! Liquidity & Systemic Resilience.
//!
//! Built from the liquidity-speed proxy `v = 100 / (M3/GDP)`: the rolling
//! variance of `v`, the rolling RMS of the quantity-identity residual
//! `eps = pi - (mu - g + dv)`, and the absolute rolling correlation of
//! `dv` with real growth.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{rolling_corr, rolling_stat, RollingKind};
use crate::panel::{Panel, BROAD_MONEY_GDP, BROAD_MONEY_GROWTH, GDP_GROWTH, INFLATION};
use crate::reason::{Cell, Reason};
use crate::scaling::{aggregate_scores, invert_bad_metric, score_cell, BoundsSet, ScoreCell};
use crate::series::TimeSeries;

pub const METRIC_INV_VAR_V: &str = "lnsr.inv_var_v";
pub const METRIC_INV_RMS_EPS: &str = "lnsr.inv_rms_eps";
pub const METRIC_ALIGN: &str = "lnsr.align";
pub const METRICS: [&str; 3] = [METRIC_INV_VAR_V, METRIC_INV_RMS_EPS, METRIC_ALIGN];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LnsrConfig {
    pub window: usize,
    /// Indicator code used as the monetary stance term `mu`.
    pub mu_source: String,
}

impl Default for LnsrConfig {
    fn default() -> Self {
        Self { window: 5, mu_source: BROAD_MONEY_GROWTH.to_string() }
    }
}

impl LnsrConfig {
    pub fn validate(&self) -> Result<()> {
        if self.window < 3 {
            return Err(Error::Config(format!("lnsr window must be at least 3, got {}", self.window)));
        }
        if self.mu_source.trim().is_empty() {
            return Err(Error::Config("lnsr.mu_source must name an indicator".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LnsrWeights {
    pub var_v: f64,
    pub rms_eps: f64,
    pub align: f64,
}

impl Default for LnsrWeights {
    fn default() -> Self {
        Self { var_v: 0.35, rms_eps: 0.35, align: 0.30 }
    }
}

impl LnsrWeights {
    pub fn as_array(&self) -> [f64; 3] {
        [self.var_v, self.rms_eps, self.align]
    }
}

/// `v = 100 / m3gdp`; non-positive depth has no speed.
pub fn liquidity_speed(m3gdp: f64) -> Cell {
    if m3gdp > 0.0 && m3gdp.is_finite() {
        Ok(100.0 / m3gdp)
    } else {
        Err(Reason::NonPositive)
    }
}

/// `eps = pi - (mu - g + dv)`.
pub fn residual_force(pi: f64, mu: f64, g: f64, dv: f64) -> f64 {
    pi - (mu - g + dv)
}

/// Raw LNSR material for one country-year.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LnsrInputs {
    pub year: i32,
    pub v: Cell,
    pub dv: Cell,
    pub var_v: Cell,
    pub eps: Cell,
    pub rms_eps: Cell,
    pub align: Cell,
    /// The alignment window had a flat series.
    pub align_degenerate: bool,
}

impl LnsrInputs {
    pub fn metric_values(&self) -> [(&'static str, Cell); 3] {
        let inv = |c: Cell| c.and_then(|x| invert_bad_metric(x).map_err(|_| Reason::NonPositive));
        [(METRIC_INV_VAR_V, inv(self.var_v)), (METRIC_INV_RMS_EPS, inv(self.rms_eps)), (METRIC_ALIGN, self.align)]
    }
}

#[derive(Debug, Clone)]
pub struct LnsrRaw {
    pub country: String,
    pub rows: Vec<LnsrInputs>,
}

fn slot(series: &TimeSeries, i: usize) -> Cell {
    series.values()[i].ok_or(Reason::MissingInput)
}

fn windowed(stat: &TimeSeries, source: &TimeSeries, i: usize, window: usize) -> Cell {
    stat.values()[i].ok_or_else(|| source.window_gap(i, window))
}

pub fn lnsr_inputs(panel: &Panel, country: &str, config: &LnsrConfig) -> Result<LnsrRaw> {
    let w = config.window;
    let m3 = panel.series(country, BROAD_MONEY_GDP)?;
    let pi = panel.series(country, INFLATION)?;
    let g = panel.series(country, GDP_GROWTH)?;
    let mu = panel.series(country, &config.mu_source)?;

    let v_cells: Vec<Cell> = m3
        .values()
        .iter()
        .map(|m| m.ok_or(Reason::MissingInput).and_then(liquidity_speed))
        .collect();
    let v = TimeSeries::new(m3.years().to_vec(), v_cells.iter().map(|c| c.ok()).collect())?;
    let dv = v.diff();

    let eps_values = (0..v.len())
        .map(|i| {
            let (p, m, gg, d) = (pi.values()[i]?, mu.values()[i]?, g.values()[i]?, dv.values()[i]?);
            Some(residual_force(p, m, gg, d))
        })
        .collect();
    let eps = TimeSeries::new(v.years().to_vec(), eps_values)?;

    let var_v = rolling_stat(&v, w, RollingKind::Variance)?;
    let rms_eps = rolling_stat(&eps, w, RollingKind::Rms)?;
    let corr = rolling_corr(&dv, &g, w)?;

    let rows = (0..v.len())
        .map(|i| {
            let dv_cell = dv.values()[i].ok_or_else(|| match i {
                0 => Reason::InsufficientHistory,
                _ => v_cells[i].and(v_cells[i - 1]).err().unwrap_or(Reason::InsufficientHistory),
            });
            let eps_cell = eps.values()[i].ok_or_else(|| {
                [slot(&pi, i), slot(&mu, i), slot(&g, i), dv_cell].iter().find_map(|c| c.err()).unwrap_or(Reason::MissingInput)
            });
            let align = corr.values.values()[i].map(f64::abs).ok_or_else(|| {
                match (dv.window_gap(i, w), g.window_gap(i, w)) {
                    (Reason::MissingInput, _) | (_, Reason::MissingInput) => Reason::MissingInput,
                    (r, _) => r,
                }
            });
            LnsrInputs {
                year: v.years()[i],
                v: v_cells[i],
                dv: dv_cell,
                var_v: windowed(&var_v, &v, i, w),
                eps: eps_cell,
                rms_eps: windowed(&rms_eps, &eps, i, w),
                align,
                align_degenerate: corr.degenerate[i],
            }
        })
        .collect();
    Ok(LnsrRaw { country: country.to_string(), rows })
}

/// Scored LNSR for one country-year.
#[derive(Debug, Clone, PartialEq)]
pub struct LnsrComponents {
    pub country: String,
    pub year: i32,
    pub inputs: LnsrInputs,
    /// Scores in weight order: inverse variance, inverse RMS, alignment.
    pub scores: [ScoreCell; 3],
    pub lnsr: Cell,
}

pub fn compute_lnsr(country: &str, inputs: &LnsrInputs, bounds: &BoundsSet, weights: &LnsrWeights) -> LnsrComponents {
    let scores = inputs.metric_values().map(|(metric, raw)| score_cell(bounds, metric, raw));
    let lnsr = aggregate_scores(&scores, &weights.as_array());
    LnsrComponents { country: country.to_string(), year: inputs.year, inputs: *inputs, scores, lnsr }
}
