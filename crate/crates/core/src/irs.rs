//! Inequality Resilience Score.
//!
//! Three components per country-year: the explanatory power (R²) of a
//! per-country regression of Gini on inflation, unemployment and log GDP
//! per capita; the stability of year-over-year Gini changes; and a
//! smoothness signal built from second differences of Gini. Sparse Gini
//! coverage is handled by dropping components, never by interpolation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{ols_fit, rms, OlsFit};
use crate::panel::{Panel, GINI, INFLATION, LOG_GDP_PER_CAPITA, UNEMPLOYMENT};
use crate::reason::{Cell, Reason};
use crate::scaling::{aggregate_scores, invert_bad_metric, score_cell, BoundsSet, ScoreCell};
use crate::series::TimeSeries;

pub const METRIC_R_SQUARED: &str = "irs.r_squared";
pub const METRIC_GINI_STABILITY: &str = "irs.gini_stability";
pub const METRIC_SMOOTHNESS: &str = "irs.smoothness";
pub const METRICS: [&str; 3] = [METRIC_R_SQUARED, METRIC_GINI_STABILITY, METRIC_SMOOTHNESS];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct IrsConfig {
    /// Minimum years with all four regression series present.
    pub min_obs: usize,
    pub smoothing_window: usize,
}

impl Default for IrsConfig {
    fn default() -> Self {
        Self { min_obs: 8, smoothing_window: 5 }
    }
}

impl IrsConfig {
    pub fn validate(&self) -> Result<()> {
        if self.min_obs < 6 {
            return Err(Error::Config(format!("irs.min_obs must be at least 6 (4 regressors + 2), got {}", self.min_obs)));
        }
        if self.smoothing_window < 3 {
            return Err(Error::Config("irs.smoothing_window must be at least 3".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IrsWeights {
    pub r_squared: f64,
    pub gini_stability: f64,
    pub smoothness: f64,
}

impl Default for IrsWeights {
    fn default() -> Self {
        Self { r_squared: 0.40, gini_stability: 0.40, smoothness: 0.20 }
    }
}

impl IrsWeights {
    pub fn as_array(&self) -> [f64; 3] {
        [self.r_squared, self.gini_stability, self.smoothness]
    }
}

/// Per-country structural fit of Gini on `[1, inflation, unemployment, log GDPpc]`.
#[derive(Debug, Clone, PartialEq)]
pub struct InequalityModel {
    pub country: String,
    /// Years where all four series were present.
    pub usable_years: Vec<i32>,
    pub fit: std::result::Result<OlsFit, Reason>,
}

pub fn fit_inequality_model(panel: &Panel, country: &str, min_obs: usize) -> Result<InequalityModel> {
    let gini = panel.series(country, GINI)?;
    let pi = panel.series(country, INFLATION)?;
    let u = panel.series(country, UNEMPLOYMENT)?;
    let lgdp = panel.series(country, LOG_GDP_PER_CAPITA)?;

    let mut years = Vec::new();
    let mut design = Vec::new();
    let mut response = Vec::new();
    for (i, &year) in gini.years().iter().enumerate() {
        if let (Some(g), Some(p), Some(u), Some(y)) =
            (gini.values()[i], pi.values()[i], u.values()[i], lgdp.values()[i])
        {
            years.push(year);
            design.push(vec![1.0, p, u, y]);
            response.push(g);
        }
    }
    let fit = if years.len() < min_obs {
        Err(Reason::CoverageGate)
    } else {
        match ols_fit(&design, &response) {
            Ok(fit) => Ok(fit),
            Err(Error::SingularDesign { .. }) | Err(Error::SampleSize { .. }) => {
                log::info!("{country}: inequality regression is singular over {} years", years.len());
                Err(Reason::SingularDesign)
            }
            Err(e) => return Err(e),
        }
    };
    Ok(InequalityModel { country: country.to_string(), usable_years: years, fit })
}

/// `|Gini_t - Gini_{t-1}|` for consecutive observed years.
pub fn delta_gini_series(gini: &TimeSeries) -> TimeSeries {
    gini.diff().map(f64::abs)
}

/// `1 / (1 + rms of second differences)` over a window of consecutive
/// observed Gini values; higher is smoother.
pub fn smoothing_signal(gini: &TimeSeries, window: usize) -> Result<TimeSeries> {
    if window < 3 {
        return Err(Error::Domain(format!("smoothing window must be at least 3, got {window}")));
    }
    let values = (0..gini.len())
        .map(|i| {
            gini.window(i, window).map(|w| {
                let second: Vec<f64> = w.windows(3).map(|t| t[2] - 2.0 * t[1] + t[0]).collect();
                1.0 / (1.0 + rms(&second))
            })
        })
        .collect();
    TimeSeries::new(gini.years().to_vec(), values)
}

/// Raw (unscored) IRS inputs for one country-year.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IrsInputs {
    pub year: i32,
    pub r_squared: Cell,
    pub abs_dgini: Cell,
    pub smoothing: Cell,
}

impl IrsInputs {
    /// `1 / (1 + |ΔGini|)`, the raw value pooled and scored.
    pub fn gini_stability(&self) -> Cell {
        self.abs_dgini.and_then(|d| invert_bad_metric(d).map_err(|_| Reason::NonPositive))
    }

    /// Raw values keyed by metric id, in weight order.
    pub fn metric_values(&self) -> [(&'static str, Cell); 3] {
        [
            (METRIC_R_SQUARED, self.r_squared),
            (METRIC_GINI_STABILITY, self.gini_stability()),
            (METRIC_SMOOTHNESS, self.smoothing),
        ]
    }
}

/// All raw IRS material for one country.
#[derive(Debug, Clone)]
pub struct IrsRaw {
    pub country: String,
    pub model: InequalityModel,
    pub gini: TimeSeries,
    pub rows: Vec<IrsInputs>,
}

pub fn irs_inputs(panel: &Panel, country: &str, config: &IrsConfig) -> Result<IrsRaw> {
    let model = fit_inequality_model(panel, country, config.min_obs)?;
    let gini = panel.series(country, GINI)?;
    let dgini = delta_gini_series(&gini);
    let smooth = smoothing_signal(&gini, config.smoothing_window)?;
    let r2: Cell = model.fit.as_ref().map(|f| f.r_squared).map_err(|r| *r);

    let rows = gini
        .years()
        .iter()
        .enumerate()
        .map(|(i, &year)| IrsInputs {
            year,
            r_squared: r2,
            abs_dgini: dgini.values()[i].ok_or(if gini.values()[i].is_none() {
                Reason::MissingInput
            } else {
                Reason::InsufficientHistory
            }),
            smoothing: smooth.values()[i].ok_or_else(|| gini.window_gap(i, config.smoothing_window)),
        })
        .collect();
    Ok(IrsRaw { country: country.to_string(), model, gini, rows })
}

/// Scored IRS for one country-year.
#[derive(Debug, Clone, PartialEq)]
pub struct IrsComponents {
    pub country: String,
    pub year: i32,
    pub inputs: IrsInputs,
    /// Scores in weight order: R², Gini stability, smoothness.
    pub scores: [ScoreCell; 3],
    pub irs: Cell,
}

pub fn compute_irs(country: &str, inputs: &IrsInputs, bounds: &BoundsSet, weights: &IrsWeights) -> IrsComponents {
    let scores = inputs.metric_values().map(|(metric, raw)| score_cell(bounds, metric, raw));
    let irs = aggregate_scores(&scores, &weights.as_array());
    IrsComponents { country: country.to_string(), year: inputs.year, inputs: *inputs, scores, irs }
}
