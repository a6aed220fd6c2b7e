//! Inflation Forecast Coherence.
//!
//! Expanding-window one-step-ahead forecasts from AR(1), an ARX(1)
//! baseline on lagged growth and unemployment ("FPAS"), and the baseline
//! shifted by a centered zeta-function signal. Rolling RMSE gains of the
//! augmented model, HMM regime accuracy and zeta/inflation alignment are
//! scored and combined into the pillar.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{
    hmm_decode, hmm_fit, ols_fit, percentile, rolling_corr, rolling_stat, zeta_critical_line, HmmConfig,
    RollingKind, ZETA_MAX_T,
};
use crate::panel::{Panel, GDP_GROWTH, INFLATION, UNEMPLOYMENT};
use crate::reason::{Cell, Reason};
use crate::scaling::{aggregate_scores, score_cell, BoundsSet, ScoreCell};
use crate::series::TimeSeries;

pub const METRIC_GAIN_FPAS: &str = "ifc.gain_fpas";
pub const METRIC_GAIN_AR: &str = "ifc.gain_ar";
pub const METRIC_HMM_ACC: &str = "ifc.hmm_acc";
pub const METRIC_ZETA_MATCH: &str = "ifc.zeta_match";
pub const METRICS: [&str; 4] = [METRIC_GAIN_FPAS, METRIC_GAIN_AR, METRIC_HMM_ACC, METRIC_ZETA_MATCH];

/// Which real functional of `zeta(1/2 + i t*)` feeds the signal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ZetaMode {
    #[default]
    Magnitude,
    RealPart,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ZetaConfig {
    pub t0: f64,
    pub scale: f64,
    pub smoothing_window: usize,
    pub mode: ZetaMode,
}

impl Default for ZetaConfig {
    fn default() -> Self {
        Self { t0: 10.0, scale: 1.0, smoothing_window: 5, mode: ZetaMode::Magnitude }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct IfcConfig {
    /// Minimum training rows before a forecast is issued.
    pub min_train: usize,
    /// Rolling window `H` for RMSE, regime accuracy and zeta match.
    pub window: usize,
    pub zeta: ZetaConfig,
    pub alpha_min: f64,
    pub alpha_max: f64,
    pub alpha_step: f64,
    /// Explicit grid; overrides the min/max/step range when set.
    pub alpha_grid: Option<Vec<f64>>,
    /// Leading share of forecastable years used to calibrate alpha.
    pub validation_fraction: f64,
    pub hmm: HmmConfig,
}

impl Default for IfcConfig {
    fn default() -> Self {
        Self {
            min_train: 6,
            window: 5,
            zeta: ZetaConfig::default(),
            alpha_min: -3.0,
            alpha_max: 3.0,
            alpha_step: 0.1,
            alpha_grid: None,
            validation_fraction: 0.6,
            hmm: HmmConfig::default(),
        }
    }
}

impl IfcConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(Error::Config(m));
        if self.min_train < 3 {
            return fail(format!("ifc.min_train must be at least 3, got {}", self.min_train));
        }
        if self.window < 3 {
            return fail(format!("ifc.window must be at least 3, got {}", self.window));
        }
        if !(self.zeta.scale > 0.0 && self.zeta.scale.is_finite()) || !self.zeta.t0.is_finite() {
            return fail("ifc.zeta needs finite t0 and a positive scale".into());
        }
        if self.zeta.smoothing_window < 1 {
            return fail("ifc.zeta.smoothing_window must be at least 1".into());
        }
        if !(self.validation_fraction > 0.0 && self.validation_fraction <= 1.0) {
            return fail(format!("ifc.validation_fraction must be in (0, 1], got {}", self.validation_fraction));
        }
        if self.hmm.n_states != 2 {
            return fail("ifc.hmm.n_states must be 2 (low/high inflation)".into());
        }
        if self.alpha_grid()?.is_empty() {
            return fail("ifc alpha grid is empty".into());
        }
        Ok(())
    }

    /// Candidate loadings, rounded to 1e-9 so a range hits its nominal points.
    pub fn alpha_grid(&self) -> Result<Vec<f64>> {
        let round = |a: f64| (a * 1e9).round() / 1e9;
        if let Some(grid) = &self.alpha_grid {
            if grid.iter().any(|a| !a.is_finite()) {
                return Err(Error::Config("ifc.alpha_grid must be finite".into()));
            }
            return Ok(grid.iter().map(|&a| round(a)).collect());
        }
        if !(self.alpha_step > 0.0) || !(self.alpha_min <= self.alpha_max) {
            return Err(Error::Config("ifc alpha range needs alpha_min <= alpha_max and a positive step".into()));
        }
        let n = ((self.alpha_max - self.alpha_min) / self.alpha_step + 1e-9).floor() as usize;
        if n > 1_000_000 {
            return Err(Error::Config("ifc alpha grid is too large".into()));
        }
        Ok((0..=n).map(|k| round(self.alpha_min + k as f64 * self.alpha_step)).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IfcWeights {
    pub gain_fpas: f64,
    pub gain_ar: f64,
    pub hmm_acc: f64,
    pub zeta_match: f64,
}

impl Default for IfcWeights {
    fn default() -> Self {
        Self { gain_fpas: 0.35, gain_ar: 0.25, hmm_acc: 0.25, zeta_match: 0.15 }
    }
}

impl IfcWeights {
    pub fn as_array(&self) -> [f64; 4] {
        [self.gain_fpas, self.gain_ar, self.hmm_acc, self.zeta_match]
    }
}

/// One-step-ahead forecasts with a per-year training audit.
#[derive(Debug, Clone, PartialEq)]
pub struct Forecast {
    pub values: TimeSeries,
    /// Last year in the training rows behind each forecast.
    pub train_last: Vec<Option<i32>>,
    /// Forecast came from a fallback rule rather than the model itself.
    pub fallback: Vec<bool>,
}

impl Forecast {
    /// True when no forecast used its own target year (or later) for training.
    pub fn out_of_sample(&self) -> bool {
        self.values
            .years()
            .iter()
            .zip(&self.train_last)
            .all(|(&y, last)| last.map_or(true, |l| l < y))
    }
}

enum Step {
    Fitted { value: f64, train_last: i32 },
    Singular { mean: f64, train_last: i32 },
    Unavailable,
}

/// Expanding-window OLS of `pi_s` on `[1, x_{s-1} for x in lagged]`,
/// forecasting `pi_t` from data through `t - 1` only.
fn expanding(pi: &TimeSeries, lagged: &[&TimeSeries], min_rows: usize) -> Vec<Step> {
    let years = pi.years();
    let lag_row = |s: usize| -> Option<Vec<f64>> {
        if s == 0 || years[s] - years[s - 1] != 1 {
            return None;
        }
        let mut row = vec![1.0];
        for x in lagged {
            row.push(x.values()[s - 1]?);
        }
        Some(row)
    };
    (0..pi.len())
        .map(|t| {
            let Some(target_row) = lag_row(t) else { return Step::Unavailable };
            let mut design = Vec::new();
            let mut response = Vec::new();
            let mut train_last = None;
            for s in 1..t {
                if let (Some(row), Some(y)) = (lag_row(s), pi.values()[s]) {
                    design.push(row);
                    response.push(y);
                    train_last = Some(years[s]);
                }
            }
            let Some(train_last) = train_last else { return Step::Unavailable };
            if design.len() < min_rows {
                return Step::Unavailable;
            }
            match ols_fit(&design, &response) {
                Ok(fit) => Step::Fitted { value: fit.predict(&target_row), train_last },
                Err(_) => Step::Singular { mean: response.iter().sum::<f64>() / response.len() as f64, train_last },
            }
        })
        .collect()
}

fn assemble(years: &[i32], steps: impl Iterator<Item = (Option<f64>, Option<i32>, bool)>) -> Result<Forecast> {
    let (mut values, mut train_last, mut fallback) = (Vec::new(), Vec::new(), Vec::new());
    for (v, l, f) in steps {
        values.push(v);
        train_last.push(l);
        fallback.push(f);
    }
    Ok(Forecast { values: TimeSeries::new(years.to_vec(), values)?, train_last, fallback })
}

/// AR(1) forecasts `c + phi pi_{t-1}`; a singular fit (flat history)
/// emits the training mean.
pub fn ar1_forecast(pi: &TimeSeries, min_train: usize) -> Result<Forecast> {
    if min_train < 3 {
        return Err(Error::Domain(format!("min_train must be at least 3, got {min_train}")));
    }
    let steps = expanding(pi, &[pi], min_train);
    assemble(
        pi.years(),
        steps.into_iter().map(|s| match s {
            Step::Fitted { value, train_last } => (Some(value), Some(train_last), false),
            Step::Singular { mean, train_last } => (Some(mean), Some(train_last), true),
            Step::Unavailable => (None, None, false),
        }),
    )
}

/// ARX(1) forecasts on `[1, pi_{t-1}, exog_{t-1}...]`, falling back to
/// AR(1) for years whose training design is singular.
pub fn fpas_arx_forecast(pi: &TimeSeries, exog: &[&TimeSeries], min_train: usize) -> Result<Forecast> {
    if exog.iter().any(|x| x.years() != pi.years()) {
        return Err(Error::Domain("exogenous series must align with inflation".into()));
    }
    let ar = ar1_forecast(pi, min_train)?;
    let mut lagged = vec![pi];
    lagged.extend_from_slice(exog);
    // At least two residual degrees of freedom beyond the parameters.
    let steps = expanding(pi, &lagged, min_train.max(lagged.len() + 3));
    assemble(
        pi.years(),
        steps.into_iter().enumerate().map(|(i, s)| match s {
            Step::Fitted { value, train_last } => (Some(value), Some(train_last), false),
            Step::Singular { .. } => (ar.values.values()[i], ar.train_last[i], true),
            Step::Unavailable => (None, None, false),
        }),
    )
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZetaSignal {
    pub years: Vec<i32>,
    pub t_star: Vec<f64>,
    pub raw: Vec<f64>,
    /// Trailing moving average of `raw`; shorter at the start.
    pub reference: Vec<f64>,
    pub centered: TimeSeries,
    pub t_star_base: f64,
    pub t_star_scale: f64,
    pub smoothing_window: usize,
}

pub fn build_zeta_signal(years: &[i32], config: &ZetaConfig) -> Result<ZetaSignal> {
    if !(config.scale > 0.0) || config.smoothing_window < 1 {
        return Err(Error::Domain("zeta signal needs a positive scale and window".into()));
    }
    let first = years.first().copied().unwrap_or(0);
    let t_star: Vec<f64> = years.iter().map(|&y| config.t0 + config.scale * f64::from(y - first)).collect();
    if let Some(t) = t_star.iter().find(|t| t.abs() > ZETA_MAX_T) {
        return Err(Error::Domain(format!("t* = {t} exceeds the supported zeta range")));
    }
    let raw = t_star
        .iter()
        .map(|&t| {
            let z = zeta_critical_line(t)?;
            Ok(match config.mode {
                ZetaMode::Magnitude => z.norm(),
                ZetaMode::RealPart => z.re,
            })
        })
        .collect::<Result<Vec<f64>>>()?;
    let w = config.smoothing_window;
    let reference: Vec<f64> = (0..raw.len())
        .map(|i| {
            let s = &raw[(i + 1).saturating_sub(w)..=i];
            s.iter().sum::<f64>() / s.len() as f64
        })
        .collect();
    let centered = raw.iter().zip(&reference).map(|(r, m)| Some(r - m)).collect();
    Ok(ZetaSignal {
        years: years.to_vec(),
        t_star,
        raw,
        reference,
        centered: TimeSeries::new(years.to_vec(), centered)?,
        t_star_base: config.t0,
        t_star_scale: config.scale,
        smoothing_window: w,
    })
}

/// First `fraction` (rounded up) of the years where both the forecast and
/// the actual exist, as an inclusive year range.
pub fn validation_segment(forecast: &TimeSeries, actual: &TimeSeries, fraction: f64) -> Option<(i32, i32)> {
    let years: Vec<i32> = forecast.present().map(|(y, _)| y).filter(|&y| actual.get(y).is_some()).collect();
    if years.is_empty() {
        return None;
    }
    let n = ((fraction * years.len() as f64).ceil() as usize).clamp(1, years.len());
    Some((years[0], years[n - 1]))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlphaCalibration {
    pub alpha: f64,
    pub validation: Option<(i32, i32)>,
    pub overlap: usize,
    pub rmse: Option<f64>,
    pub diagnostic: Option<String>,
}

fn same_loss(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs()) + 1e-15
}

/// Grid search for the loading minimising RMSE of
/// `actual - fpas - alpha * centered` over the validation years. Ties go
/// to the smallest `|alpha|`, then to the negative value.
pub fn calibrate_alpha(
    fpas: &TimeSeries,
    signal: &ZetaSignal,
    actual: &TimeSeries,
    validation: Option<(i32, i32)>,
    grid: &[f64],
) -> AlphaCalibration {
    let pairs: Vec<(f64, f64)> = match validation {
        Some((lo, hi)) => fpas
            .present()
            .filter(|&(y, _)| (lo..=hi).contains(&y))
            .filter_map(|(y, f)| Some((actual.get(y)? - f, signal.centered.get(y)?)))
            .collect(),
        None => Vec::new(),
    };
    let fallback = |diag: String| AlphaCalibration {
        alpha: 0.0,
        validation,
        overlap: pairs.len(),
        rmse: None,
        diagnostic: Some(diag),
    };
    if pairs.len() < 3 {
        return fallback(format!("only {} validation years overlap; alpha set to 0", pairs.len()));
    }
    if grid.is_empty() {
        return fallback("empty alpha grid; alpha set to 0".into());
    }
    let loss = |a: f64| (pairs.iter().map(|(r, c)| (r - a * c).powi(2)).sum::<f64>() / pairs.len() as f64).sqrt();
    let mut best = (grid[0], loss(grid[0]));
    for &a in &grid[1..] {
        let l = loss(a);
        let better = if same_loss(l, best.1) {
            a.abs() < best.0.abs() || (a.abs() == best.0.abs() && a < best.0)
        } else {
            l < best.1
        };
        if better {
            best = (a, l);
        }
    }
    AlphaCalibration { alpha: best.0, validation, overlap: pairs.len(), rmse: Some(best.1), diagnostic: None }
}

/// `fpas_t + alpha * centered_t` wherever the baseline forecast exists.
pub fn fpas_zeta_forecast(fpas: &TimeSeries, signal: &ZetaSignal, alpha: f64) -> TimeSeries {
    let values = fpas
        .years()
        .iter()
        .zip(fpas.values())
        .map(|(&y, f)| Some(f.as_ref()? + alpha * signal.centered.get(y)?))
        .collect();
    TimeSeries::new(fpas.years().to_vec(), values).expect("same years as the baseline")
}

/// Trailing-window RMSE of one-step errors; complete windows only.
pub fn rolling_rmse(actual: &TimeSeries, forecast: &TimeSeries, window: usize) -> Result<TimeSeries> {
    if actual.years() != forecast.years() {
        return Err(Error::Domain("forecast and actual must align".into()));
    }
    let errors = actual
        .values()
        .iter()
        .zip(forecast.values())
        .map(|(a, f)| Some(a.as_ref()? - f.as_ref()?))
        .collect();
    rolling_stat(&TimeSeries::new(actual.years().to_vec(), errors)?, window, RollingKind::Rms)
}

/// Percent improvement `100 (base - new) / base`.
pub fn delta_rmse(rmse_base: f64, rmse_new: f64) -> Cell {
    if !(rmse_base.is_finite() && rmse_new.is_finite()) || rmse_base < 0.0 || rmse_new < 0.0 {
        return Err(Reason::NonPositive);
    }
    if rmse_base == 0.0 {
        return if rmse_new == 0.0 { Ok(0.0) } else { Err(Reason::ZeroBase) };
    }
    Ok(100.0 * (rmse_base - rmse_new) / rmse_base)
}

pub fn truncate_gain(delta: f64) -> f64 {
    delta.max(0.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegimeAccuracy {
    /// Share of each trailing window where decoded and reference regimes agree.
    pub values: TimeSeries,
    /// Per year: decoded state equals the median-split reference.
    pub matches: TimeSeries,
    pub median: Option<f64>,
    /// Why every value is absent, if so.
    pub unavailable: Option<Reason>,
}

/// Fits a two-state HMM on the full inflation history and scores its
/// Viterbi path against a median split (above median = high regime).
pub fn regime_accuracy(pi: &TimeSeries, window: usize, config: &HmmConfig) -> Result<RegimeAccuracy> {
    let absent = |reason| RegimeAccuracy {
        values: TimeSeries::new(pi.years().to_vec(), vec![None; pi.len()]).expect("same years"),
        matches: TimeSeries::new(pi.years().to_vec(), vec![None; pi.len()]).expect("same years"),
        median: None,
        unavailable: Some(reason),
    };
    let present: Vec<(i32, f64)> = pi.present().collect();
    if present.len() < 2 * config.n_states.max(2) || present.len() < window {
        return Ok(absent(Reason::InsufficientHistory));
    }
    let xs: Vec<f64> = present.iter().map(|p| p.1).collect();
    let fit = hmm_fit(&xs, config)?;
    if fit.degenerate {
        log::info!("constant inflation history; regime accuracy undefined");
        return Ok(absent(Reason::Degenerate));
    }
    let states = hmm_decode(&fit.model, &xs)?;
    let median = percentile(&xs, 0.5)?;
    let high_state = fit.model.n_states - 1;
    let mut matches = vec![None; pi.len()];
    for ((year, x), state) in present.iter().zip(&states) {
        let idx = pi.index_of(*year).expect("present year");
        let agree = (*x > median) == (*state == high_state);
        matches[idx] = Some(if agree { 1.0 } else { 0.0 });
    }
    let matches = TimeSeries::new(pi.years().to_vec(), matches)?;
    let values = rolling_stat(&matches, window, RollingKind::Mean)?;
    Ok(RegimeAccuracy { values, matches, median: Some(median), unavailable: None })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZetaMatch {
    pub values: TimeSeries,
    pub degenerate: Vec<bool>,
}

/// `|corr(centered signal, d pi)|` over trailing windows.
pub fn zeta_match(signal: &ZetaSignal, pi: &TimeSeries, window: usize) -> Result<ZetaMatch> {
    let dpi = pi.diff();
    let centered = signal.centered.align_to(pi.years());
    let corr = rolling_corr(&centered, &dpi, window)?;
    Ok(ZetaMatch { values: corr.values.map(f64::abs), degenerate: corr.degenerate })
}

/// All forecasts behind one country's IFC.
#[derive(Debug, Clone, PartialEq)]
pub struct ForecastSet {
    pub country: String,
    pub actual: TimeSeries,
    pub ar1: Forecast,
    pub fpas: Forecast,
    pub fpas_zeta: TimeSeries,
    pub calibration: AlphaCalibration,
}

impl ForecastSet {
    pub fn years(&self) -> &[i32] {
        self.actual.years()
    }

    pub fn alpha(&self) -> f64 {
        self.calibration.alpha
    }
}

/// Raw IFC material for one country-year.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IfcInputs {
    pub year: i32,
    pub rmse_ar: Cell,
    pub rmse_fpas: Cell,
    pub rmse_fz: Cell,
    /// Percent RMSE improvement of FPAS+zeta over FPAS.
    pub d_fpas: Cell,
    /// Percent RMSE improvement of FPAS+zeta over AR(1).
    pub d_ar: Cell,
    pub hmm_acc: Cell,
    pub zeta_match: Cell,
    pub zeta_degenerate: bool,
}

impl IfcInputs {
    pub fn d_fpas_pos(&self) -> Cell {
        self.d_fpas.map(truncate_gain)
    }

    pub fn d_ar_pos(&self) -> Cell {
        self.d_ar.map(truncate_gain)
    }

    pub fn metric_values(&self) -> [(&'static str, Cell); 4] {
        [
            (METRIC_GAIN_FPAS, self.d_fpas_pos()),
            (METRIC_GAIN_AR, self.d_ar_pos()),
            (METRIC_HMM_ACC, self.hmm_acc),
            (METRIC_ZETA_MATCH, self.zeta_match),
        ]
    }
}

#[derive(Debug, Clone)]
pub struct IfcRaw {
    pub country: String,
    pub forecasts: ForecastSet,
    pub signal: ZetaSignal,
    pub regime: RegimeAccuracy,
    pub rows: Vec<IfcInputs>,
}

fn rmse_cell(rmse: &TimeSeries, errors_from: &TimeSeries, i: usize, window: usize) -> Cell {
    rmse.values()[i].ok_or_else(|| errors_from.window_gap(i, window))
}

pub fn ifc_inputs(panel: &Panel, country: &str, config: &IfcConfig) -> Result<IfcRaw> {
    let pi = panel.series(country, INFLATION)?;
    let g = panel.series(country, GDP_GROWTH)?;
    let u = panel.series(country, UNEMPLOYMENT)?;
    let h = config.window;

    let ar1 = ar1_forecast(&pi, config.min_train)?;
    let fpas = fpas_arx_forecast(&pi, &[&g, &u], config.min_train)?;
    let signal = build_zeta_signal(pi.years(), &config.zeta)?;
    let validation = validation_segment(&fpas.values, &pi, config.validation_fraction);
    let calibration = calibrate_alpha(&fpas.values, &signal, &pi, validation, &config.alpha_grid()?);
    if let Some(d) = &calibration.diagnostic {
        log::info!("{country}: {d}");
    }
    let fpas_zeta = fpas_zeta_forecast(&fpas.values, &signal, calibration.alpha);

    let rmse_ar = rolling_rmse(&pi, &ar1.values, h)?;
    let rmse_fpas = rolling_rmse(&pi, &fpas.values, h)?;
    let rmse_fz = rolling_rmse(&pi, &fpas_zeta, h)?;
    let regime = regime_accuracy(&pi, h, &config.hmm)?;
    let zm = zeta_match(&signal, &pi, h)?;

    let rows = (0..pi.len())
        .map(|i| {
            let ra = rmse_cell(&rmse_ar, &ar1.values, i, h);
            let rf = rmse_cell(&rmse_fpas, &fpas.values, i, h);
            let rz = rmse_cell(&rmse_fz, &fpas_zeta, i, h);
            let delta = |base: Cell| match (base, rz) {
                (Ok(b), Ok(n)) => delta_rmse(b, n),
                (Err(r), _) | (_, Err(r)) => Err(r),
            };
            IfcInputs {
                year: pi.years()[i],
                rmse_ar: ra,
                rmse_fpas: rf,
                rmse_fz: rz,
                d_fpas: delta(rf),
                d_ar: delta(ra),
                hmm_acc: regime.values.values()[i]
                    .ok_or_else(|| regime.unavailable.unwrap_or_else(|| regime.matches.window_gap(i, h))),
                zeta_match: zm.values.values()[i].ok_or_else(|| pi.diff().window_gap(i, h)),
                zeta_degenerate: zm.degenerate[i],
            }
        })
        .collect();

    Ok(IfcRaw {
        country: country.to_string(),
        forecasts: ForecastSet { country: country.to_string(), actual: pi, ar1, fpas, fpas_zeta, calibration },
        signal,
        regime,
        rows,
    })
}

/// Scored IFC for one country-year.
#[derive(Debug, Clone, PartialEq)]
pub struct IfcComponents {
    pub country: String,
    pub year: i32,
    pub inputs: IfcInputs,
    /// Scores in weight order: FPAS gain, AR gain, HMM accuracy, zeta match.
    pub scores: [ScoreCell; 4],
    pub ifc: Cell,
}

pub fn compute_ifc(country: &str, inputs: &IfcInputs, bounds: &BoundsSet, weights: &IfcWeights) -> IfcComponents {
    let scores = inputs.metric_values().map(|(metric, raw)| score_cell(bounds, metric, raw));
    let ifc = aggregate_scores(&scores, &weights.as_array());
    IfcComponents { country: country.to_string(), year: inputs.year, inputs: *inputs, scores, ifc }
}
