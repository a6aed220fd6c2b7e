//! End-to-end run over a panel: raw pillar inputs per country, pooled
//! bounds, scores, GI, decomposition, and the output tables built from them.

use std::collections::BTreeMap;
use std::path::Path;

use rayon::prelude::*;

use crate::composite::{aggregate_gi, decompose_dlog, descriptive_stats, present_mask, regional_mean, MemberValues};
use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::ifc::{self, compute_ifc, ifc_inputs, IfcComponents, IfcRaw};
use crate::irs::{self, compute_irs, irs_inputs, IrsComponents, IrsRaw};
use crate::lnsr::{self, compute_lnsr, lnsr_inputs, LnsrComponents, LnsrRaw};
use crate::panel::{
    carry_forward_latest, derive_indicators, parse_panel_csv, DerivationWarning, IndicatorRegistry, Panel, GDP_GROWTH,
};
use crate::reason::{Cell, Reason};
use crate::report::{Field, Table};
use crate::scaling::{BoundsSet, ScoreCell, ScoreMode};
use crate::scenario::ScenarioPaths;
use crate::series::TimeSeries;

pub fn load_panel(path: &Path) -> Result<Panel> {
    let file = std::fs::File::open(path)?;
    parse_panel_csv(std::io::BufReader::new(file), &IndicatorRegistry::default())
}

/// Everything computed for one country-year.
#[derive(Debug, Clone, PartialEq)]
pub struct YearRecord {
    pub year: i32,
    pub irs: IrsComponents,
    pub lnsr: LnsrComponents,
    pub ifc: IfcComponents,
    pub gi: Cell,
    pub present: String,
    pub dlog_gi: Cell,
    pub contributions: std::result::Result<[f64; 3], Reason>,
}

impl YearRecord {
    pub fn pillars(&self) -> [Cell; 3] {
        [self.irs.irs, self.lnsr.lnsr, self.ifc.ifc]
    }

    /// `sum(contributions) - dlog_gi` when both are defined.
    pub fn residual(&self) -> Option<f64> {
        let c = self.contributions.ok()?;
        Some(c.iter().sum::<f64>() - self.dlog_gi.ok()?)
    }
}

#[derive(Debug, Clone)]
pub struct CountryRun {
    pub country: String,
    pub irs: IrsRaw,
    pub lnsr: LnsrRaw,
    pub ifc: IfcRaw,
    pub years: Vec<YearRecord>,
}

impl CountryRun {
    pub fn gi_series(&self) -> TimeSeries {
        self.series(|r| r.gi)
    }

    pub fn series(&self, f: impl Fn(&YearRecord) -> Cell) -> TimeSeries {
        let years = self.years.iter().map(|r| r.year).collect();
        TimeSeries::new(years, self.years.iter().map(|r| f(r).ok()).collect()).expect("ascending years")
    }

    /// Latest present value at or before `cutoff`, with its year.
    pub fn latest(&self, cutoff: i32, f: impl Fn(&YearRecord) -> Cell) -> Option<(f64, i32)> {
        self.years.iter().rev().filter(|r| r.year <= cutoff).find_map(|r| f(r).ok().map(|v| (v, r.year)))
    }
}

struct RawCountry {
    country: String,
    irs: IrsRaw,
    lnsr: LnsrRaw,
    ifc: IfcRaw,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub cutoff: i32,
    /// Truncated panel with derived indicators.
    pub panel: Panel,
    pub warnings: Vec<DerivationWarning>,
    pub pools: BTreeMap<String, Vec<f64>>,
    pub bounds: BoundsSet,
    pub countries: Vec<CountryRun>,
}

pub fn scored_metrics() -> impl Iterator<Item = &'static str> {
    irs::METRICS.into_iter().chain(lnsr::METRICS).chain(ifc::METRICS)
}

pub fn run_pipeline(panel: &Panel, config: &RunConfig) -> Result<RunOutput> {
    config.validate()?;
    let lnsr_cfg = config.lnsr_config();
    let ifc_cfg = config.ifc_config();
    if !panel.registry().contains(&lnsr_cfg.mu_source) {
        return Err(Error::Config(format!("lnsr.mu_source '{}' is not a known indicator", lnsr_cfg.mu_source)));
    }
    let truncated = panel.truncate_after(config.cutoff)?;
    let (panel, warnings) = derive_indicators(&truncated);

    let raws: Vec<RawCountry> = panel
        .countries()
        .par_iter()
        .map(|c| {
            Ok(RawCountry {
                country: c.clone(),
                irs: irs_inputs(&panel, c, &config.irs)?,
                lnsr: lnsr_inputs(&panel, c, &lnsr_cfg)?,
                ifc: ifc_inputs(&panel, c, &ifc_cfg)?,
            })
        })
        .collect::<Result<_>>()?;

    let mut pools: BTreeMap<String, Vec<f64>> = scored_metrics().map(|m| (m.to_string(), Vec::new())).collect();
    for raw in &raws {
        let metrics = raw
            .irs
            .rows
            .iter()
            .flat_map(|r| r.metric_values())
            .chain(raw.lnsr.rows.iter().flat_map(|r| r.metric_values()))
            .chain(raw.ifc.rows.iter().flat_map(|r| r.metric_values()));
        for (metric, value) in metrics {
            if let Ok(v) = value {
                pools.get_mut(metric).expect("registered metric").push(v);
            }
        }
    }
    let mut bounds = BoundsSet::fit(&pools, config.bounds.quantiles())?;
    if config.bounds.r_squared_mode == ScoreMode::Direct {
        bounds.set_direct(irs::METRIC_R_SQUARED);
    }

    let w = &config.weights;
    let countries = raws
        .into_iter()
        .map(|raw| {
            let n = raw.irs.rows.len();
            if raw.lnsr.rows.len() != n || raw.ifc.rows.len() != n {
                return Err(Error::Invariant(format!("{}: pillar inputs cover different years", raw.country)));
            }
            let mut years: Vec<YearRecord> = Vec::with_capacity(n);
            for i in 0..n {
                let irs = compute_irs(&raw.country, &raw.irs.rows[i], &bounds, &w.irs);
                let lnsr = compute_lnsr(&raw.country, &raw.lnsr.rows[i], &bounds, &w.lnsr);
                let ifc = compute_ifc(&raw.country, &raw.ifc.rows[i], &bounds, &w.ifc);
                if irs.year != lnsr.year || irs.year != ifc.year {
                    return Err(Error::Invariant(format!("{}: pillar years misaligned", raw.country)));
                }
                let opts = [irs.irs.ok(), lnsr.lnsr.ok(), ifc.ifc.ok()];
                let gi = aggregate_gi(opts, &w.gi, w.epsilon_floor).ok_or(Reason::AllComponentsMissing);
                let curr = [irs.irs, lnsr.lnsr, ifc.ifc];
                let (dlog_gi, contributions) = match years.last() {
                    Some(prev) if prev.year + 1 == irs.year => {
                        let dlog = match (prev.gi, gi) {
                            (Ok(a), Ok(b)) if a > 0.0 && b > 0.0 => Ok(b.ln() - a.ln()),
                            (Ok(_), Ok(_)) => Err(Reason::NonPositive),
                            (Err(r), _) | (_, Err(r)) => Err(r),
                        };
                        (dlog, decompose_dlog(prev.pillars(), curr, &w.gi))
                    }
                    _ => (Err(Reason::InsufficientHistory), Err(Reason::InsufficientHistory)),
                };
                years.push(YearRecord {
                    year: irs.year,
                    present: present_mask(opts),
                    irs,
                    lnsr,
                    ifc,
                    gi,
                    dlog_gi,
                    contributions,
                });
            }
            Ok(CountryRun { country: raw.country, irs: raw.irs, lnsr: raw.lnsr, ifc: raw.ifc, years })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(RunOutput { cutoff: config.cutoff, panel, warnings, pools, bounds, countries })
}

fn score_fields(s: &ScoreCell) -> [Field; 3] {
    [Field::cell(s.score), Field::reason(s.score), s.degenerate.into()]
}

fn unscored_row(t: &mut Table, country: &str, year: i32, pillar: &str, metric: &str, raw: Cell) {
    t.push(vec![
        country.into(),
        year.into(),
        pillar.into(),
        metric.into(),
        Field::cell(raw),
        Field::reason(raw),
        Field::Blank,
        Field::reason_code(Reason::Unscored),
        false.into(),
        false.into(),
    ]);
}

fn aggregate_row(t: &mut Table, country: &str, year: i32, pillar: &str, metric: &str, value: Cell) {
    t.push(vec![
        country.into(),
        year.into(),
        pillar.into(),
        metric.into(),
        Field::Blank,
        Field::reason_code(Reason::Unscored),
        Field::cell(value),
        Field::reason(value),
        false.into(),
        false.into(),
    ]);
}

impl RunOutput {
    pub fn country(&self, iso3: &str) -> Option<&CountryRun> {
        self.countries.iter().find(|c| c.country == iso3)
    }

    pub fn pillars_table(&self) -> Table {
        let mut t = Table::new("pillars", &["country", "year", "irs", "lnsr", "ifc", "gi"], true);
        for c in &self.countries {
            for r in &c.years {
                let [a, b, d] = r.pillars();
                t.push(vec![
                    c.country.as_str().into(),
                    r.year.into(),
                    Field::cell(a),
                    Field::cell(b),
                    Field::cell(d),
                    Field::cell(r.gi),
                ]);
            }
        }
        t
    }

    pub fn gi_table(&self) -> Table {
        let mut t = Table::new("gi", &["country", "year", "gi", "present_pillars", "reason"], true);
        for c in &self.countries {
            for r in &c.years {
                t.push(vec![
                    c.country.as_str().into(),
                    r.year.into(),
                    Field::cell(r.gi),
                    Field::opt_text((!r.present.is_empty()).then_some(r.present.as_str())),
                    Field::reason(r.gi),
                ]);
            }
        }
        t
    }

    /// Every raw metric, score and reason, plus pillar and GI rows.
    pub fn components_table(&self) -> Table {
        let mut t = Table::new(
            "components",
            &[
                "country",
                "year",
                "pillar",
                "metric",
                "raw",
                "raw_reason",
                "score",
                "score_reason",
                "degenerate_bounds",
                "degenerate_input",
            ],
            false,
        );
        for c in &self.countries {
            let iso = c.country.as_str();
            for r in &c.years {
                let y = r.year;
                let flat = [false, false, r.lnsr.inputs.align_degenerate];
                for (((metric, raw), s), flat) in r.irs.inputs.metric_values().iter().zip(&r.irs.scores).zip([false; 3]) {
                    let mut row = vec![iso.into(), y.into(), "IRS".into(), (*metric).into(), Field::cell(*raw), Field::reason(*raw)];
                    row.extend(score_fields(s));
                    row.push(flat.into());
                    t.push(row);
                }
                unscored_row(&mut t, iso, y, "IRS", "irs.abs_dgini", r.irs.inputs.abs_dgini);
                aggregate_row(&mut t, iso, y, "IRS", "irs", r.irs.irs);

                for (((metric, raw), s), flat) in r.lnsr.inputs.metric_values().iter().zip(&r.lnsr.scores).zip(flat) {
                    let mut row = vec![iso.into(), y.into(), "LNSR".into(), (*metric).into(), Field::cell(*raw), Field::reason(*raw)];
                    row.extend(score_fields(s));
                    row.push(flat.into());
                    t.push(row);
                }
                let li = &r.lnsr.inputs;
                for (metric, raw) in [
                    ("lnsr.v", li.v),
                    ("lnsr.dv", li.dv),
                    ("lnsr.var_v", li.var_v),
                    ("lnsr.eps", li.eps),
                    ("lnsr.rms_eps", li.rms_eps),
                ] {
                    unscored_row(&mut t, iso, y, "LNSR", metric, raw);
                }
                aggregate_row(&mut t, iso, y, "LNSR", "lnsr", r.lnsr.lnsr);

                let fi = &r.ifc.inputs;
                let flat = [false, false, false, fi.zeta_degenerate];
                for (((metric, raw), s), flat) in fi.metric_values().iter().zip(&r.ifc.scores).zip(flat) {
                    let mut row = vec![iso.into(), y.into(), "IFC".into(), (*metric).into(), Field::cell(*raw), Field::reason(*raw)];
                    row.extend(score_fields(s));
                    row.push(flat.into());
                    t.push(row);
                }
                for (metric, raw) in [
                    ("ifc.rmse_ar", fi.rmse_ar),
                    ("ifc.rmse_fpas", fi.rmse_fpas),
                    ("ifc.rmse_fz", fi.rmse_fz),
                    ("ifc.d_fpas", fi.d_fpas),
                    ("ifc.d_ar", fi.d_ar),
                ] {
                    unscored_row(&mut t, iso, y, "IFC", metric, raw);
                }
                aggregate_row(&mut t, iso, y, "IFC", "ifc", r.ifc.ifc);
                aggregate_row(&mut t, iso, y, "GI", "gi", r.gi);
            }
        }
        t
    }

    pub fn decompose_table(&self) -> Table {
        let mut t = Table::new(
            "decompose",
            &["country", "year", "gi", "dlog_gi", "c_irs", "c_lnsr", "c_ifc", "residual", "reason"],
            false,
        );
        for c in &self.countries {
            for r in &c.years {
                let contrib = r.contributions.ok();
                let part = |i: usize| Field::opt(contrib.map(|c| c[i]));
                let reason = match (r.contributions, r.dlog_gi) {
                    (Err(e), _) | (Ok(_), Err(e)) => Field::reason_code(e),
                    _ => Field::Blank,
                };
                t.push(vec![
                    c.country.as_str().into(),
                    r.year.into(),
                    Field::cell(r.gi),
                    Field::cell(r.dlog_gi),
                    part(0),
                    part(1),
                    part(2),
                    Field::opt(r.residual()),
                    reason,
                ]);
            }
        }
        t
    }

    /// Latest observation at or before the cutoff for every indicator.
    pub fn snapshot_table(&self) -> Table {
        let mut t = Table::new("snapshot", &["country", "indicator", "value", "source_year"], false);
        for ((country, key), v) in carry_forward_latest(&self.panel, self.cutoff) {
            t.push(vec![country.into(), key.as_str().into(), v.value.into(), v.source_year.into()]);
        }
        t
    }

    /// Latest GI and pillars at or before the cutoff, per field.
    pub fn snapshot_pillars_table(&self) -> Table {
        let mut t = Table::new(
            "snapshot_pillars",
            &["country", "gi", "gi_year", "irs", "irs_year", "lnsr", "lnsr_year", "ifc", "ifc_year"],
            true,
        );
        for c in &self.countries {
            let mut row = vec![c.country.as_str().into()];
            for f in [
                (|r: &YearRecord| r.gi) as fn(&YearRecord) -> Cell,
                |r| r.irs.irs,
                |r| r.lnsr.lnsr,
                |r| r.ifc.ifc,
            ] {
                let latest = c.latest(self.cutoff, f);
                row.push(Field::opt(latest.map(|l| l.0)));
                row.push(latest.map_or(Field::Blank, |l| l.1.into()));
            }
            t.push(row);
        }
        t
    }

    pub fn gi_stats_table(&self) -> Table {
        let mut t = Table::new("gi_stats", &["country", "n", "mean", "std", "min", "max", "last", "last_year"], true);
        for c in &self.countries {
            let row = match descriptive_stats(&c.gi_series()) {
                Some(s) => vec![
                    c.country.as_str().into(),
                    s.n.into(),
                    s.mean.into(),
                    Field::opt(s.std),
                    s.min.into(),
                    s.max.into(),
                    s.last.into(),
                    s.last_year.into(),
                ],
                None => {
                    let mut row = vec![c.country.as_str().into(), 0usize.into()];
                    row.extend(std::iter::repeat(Field::Blank).take(6));
                    row
                }
            };
            t.push(row);
        }
        t
    }

    pub fn inequality_fits_table(&self) -> Table {
        const TERMS: [&str; 4] = ["const", "inflation", "unemployment", "log_gdppc"];
        let mut t = Table::new(
            "inequality_fits",
            &["country", "term", "coefficient", "std_error", "t_stat", "p_value", "r_squared", "n_obs", "reason"],
            false,
        );
        for c in &self.countries {
            let model = &c.irs.model;
            match &model.fit {
                Ok(fit) => {
                    for (i, term) in TERMS.iter().enumerate() {
                        t.push(vec![
                            c.country.as_str().into(),
                            (*term).into(),
                            fit.coefficients[i].into(),
                            Field::opt(Some(fit.std_errors[i]).filter(|x| x.is_finite())),
                            Field::opt(Some(fit.t_stats[i]).filter(|x| x.is_finite())),
                            Field::opt(Some(fit.p_values[i]).filter(|x| x.is_finite())),
                            fit.r_squared.into(),
                            fit.n_obs.into(),
                            Field::Blank,
                        ]);
                    }
                }
                Err(reason) => {
                    let mut row = vec![c.country.as_str().into(), Field::Blank];
                    row.extend(std::iter::repeat(Field::Blank).take(5));
                    row.push(model.usable_years.len().into());
                    row.push(Field::reason_code(*reason));
                    t.push(row);
                }
            }
        }
        t
    }

    pub fn forecasts_table(&self) -> Table {
        let mut t = Table::new(
            "forecasts",
            &[
                "country",
                "year",
                "actual",
                "ar1",
                "ar1_fallback",
                "fpas",
                "fpas_fallback",
                "fpas_zeta",
                "zeta_centered",
                "train_last",
            ],
            false,
        );
        for c in &self.countries {
            let f = &c.ifc.forecasts;
            let centered = c.ifc.signal.centered.align_to(f.years());
            for (i, &year) in f.years().iter().enumerate() {
                t.push(vec![
                    c.country.as_str().into(),
                    year.into(),
                    Field::opt(f.actual.values()[i]),
                    Field::opt(f.ar1.values.values()[i]),
                    f.ar1.fallback[i].into(),
                    Field::opt(f.fpas.values.values()[i]),
                    f.fpas.fallback[i].into(),
                    Field::opt(f.fpas_zeta.values()[i]),
                    Field::opt(centered.values()[i]),
                    f.fpas.train_last[i].map_or(Field::Blank, Field::from),
                ]);
            }
        }
        t
    }

    pub fn alpha_table(&self) -> Table {
        let mut t = Table::new(
            "alpha",
            &["country", "alpha", "validation_start", "validation_end", "overlap", "rmse", "diagnostic"],
            false,
        );
        for c in &self.countries {
            let a = &c.ifc.forecasts.calibration;
            t.push(vec![
                c.country.as_str().into(),
                a.alpha.into(),
                a.validation.map_or(Field::Blank, |v| v.0.into()),
                a.validation.map_or(Field::Blank, |v| v.1.into()),
                a.overlap.into(),
                Field::opt(a.rmse),
                Field::opt_text(a.diagnostic.as_deref()),
            ]);
        }
        t
    }

    pub fn bounds_table(&self) -> Table {
        let mut t = Table::new("bounds", &["metric", "lower", "upper", "pool_size", "mode"], false);
        for metric in scored_metrics() {
            let mode = if self.bounds.is_direct(metric) { "direct" } else { "pooled" };
            let row = match self.bounds.get(metric) {
                Some(b) => vec![metric.into(), b.p5.into(), b.p95.into(), b.pool_size.into(), mode.into()],
                None => vec![metric.into(), Field::Blank, Field::Blank, 0usize.into(), mode.into()],
            };
            t.push(row);
        }
        t
    }

    /// Field-wise regional means of each member's latest values.
    pub fn region_table(&self, regions: &BTreeMap<String, Vec<String>>) -> Table {
        let mut t = Table::new(
            "region",
            &["region", "members", "gi", "gi_n", "irs", "irs_n", "lnsr", "lnsr_n", "ifc", "ifc_n"],
            true,
        );
        for (region, codes) in regions {
            let members: Vec<MemberValues> = codes
                .iter()
                .filter_map(|code| {
                    let c = self.country(code);
                    if c.is_none() {
                        log::warn!("region {region}: member {code} not in panel");
                    }
                    c
                })
                .map(|c| MemberValues {
                    gi: c.latest(self.cutoff, |r| r.gi).map(|l| l.0),
                    irs: c.latest(self.cutoff, |r| r.irs.irs).map(|l| l.0),
                    lnsr: c.latest(self.cutoff, |r| r.lnsr.lnsr).map(|l| l.0),
                    ifc: c.latest(self.cutoff, |r| r.ifc.ifc).map(|l| l.0),
                })
                .collect();
            let row = regional_mean(region, &members);
            let mut out = vec![region.as_str().into(), row.members.into()];
            for f in [row.gi, row.irs, row.lnsr, row.ifc] {
                out.push(Field::opt(f.mean));
                out.push(f.n.into());
            }
            t.push(out);
        }
        t
    }

    /// Plot-ready series, one table per figure.
    pub fn figure_tables(&self, focus: &str) -> Vec<Table> {
        let fc = self.country(focus);
        if fc.is_none() {
            log::warn!("figure focus country {focus} not in panel; single-country figures are empty");
        }
        let focus_years = || fc.into_iter().flat_map(|c| c.years.iter());

        let mut fig1 = Table::new("fig1_gi_pillars", &["year", "gi", "irs", "lnsr", "ifc"], false);
        for r in focus_years() {
            let [a, b, c] = r.pillars();
            fig1.push(vec![r.year.into(), Field::cell(r.gi), Field::cell(a), Field::cell(b), Field::cell(c)]);
        }

        let mut fig2 = Table::new("fig2_gi_trajectories", &["country", "year", "gi"], false);
        for c in &self.countries {
            for r in &c.years {
                fig2.push(vec![c.country.as_str().into(), r.year.into(), Field::cell(r.gi)]);
            }
        }

        let mut fig3 = Table::new("fig3_dlog_contributions", &["year", "dlog_gi", "c_irs", "c_lnsr", "c_ifc"], false);
        for r in focus_years() {
            let part = |i: usize| Field::opt(r.contributions.ok().map(|c| c[i]));
            fig3.push(vec![r.year.into(), Field::cell(r.dlog_gi), part(0), part(1), part(2)]);
        }

        let mut fig4 = Table::new("fig4_scaling_maps", &["metric", "raw", "score"], false);
        for (metric, pool) in &self.pools {
            let mut xs = pool.clone();
            xs.sort_by(f64::total_cmp);
            xs.dedup();
            for x in xs {
                if let Some(s) = self.bounds.score(metric, x) {
                    fig4.push(vec![metric.as_str().into(), x.into(), s.value.into()]);
                }
            }
        }

        let mut fig5 = Table::new("fig5_inequality", &["year", "gini", "abs_dgini", "smoothing", "irs"], false);
        if let Some(c) = fc {
            for (i, r) in c.years.iter().enumerate() {
                let inp = &r.irs.inputs;
                fig5.push(vec![
                    r.year.into(),
                    Field::opt(c.irs.gini.values()[i]),
                    Field::cell(inp.abs_dgini),
                    Field::cell(inp.smoothing),
                    Field::cell(r.irs.irs),
                ]);
            }
        }

        let mut fig6 = Table::new("fig6_liquidity_speed", &["year", "v", "var_v"], false);
        let mut fig7 = Table::new("fig7_residual_force", &["year", "eps", "rms_eps"], false);
        let mut fig8 = Table::new("fig8_cycle_alignment", &["year", "dv", "gdp_growth", "align"], false);
        let growth = fc.and_then(|c| self.panel.series(&c.country, GDP_GROWTH).ok());
        for (i, r) in focus_years().enumerate() {
            let li = &r.lnsr.inputs;
            fig6.push(vec![r.year.into(), Field::cell(li.v), Field::cell(li.var_v)]);
            fig7.push(vec![r.year.into(), Field::cell(li.eps), Field::cell(li.rms_eps)]);
            let g = growth.as_ref().and_then(|g| g.values()[i]);
            fig8.push(vec![r.year.into(), Field::cell(li.dv), Field::opt(g), Field::cell(li.align)]);
        }

        let mut fig9 = Table::new("fig9_forecasts", &["year", "actual", "ar1", "fpas", "fpas_zeta"], false);
        if let Some(c) = fc {
            let f = &c.ifc.forecasts;
            for (i, &year) in f.years().iter().enumerate() {
                fig9.push(vec![
                    year.into(),
                    Field::opt(f.actual.values()[i]),
                    Field::opt(f.ar1.values.values()[i]),
                    Field::opt(f.fpas.values.values()[i]),
                    Field::opt(f.fpas_zeta.values()[i]),
                ]);
            }
        }

        vec![fig1, fig2, fig3, fig4, fig5, fig6, fig7, fig8, fig9]
    }

    /// Tables written by the compute command.
    pub fn compute_tables(&self, config: &RunConfig) -> Vec<Table> {
        let mut tables = vec![
            self.pillars_table(),
            self.gi_table(),
            self.components_table(),
            self.snapshot_table(),
            self.snapshot_pillars_table(),
            self.gi_stats_table(),
            self.bounds_table(),
            self.inequality_fits_table(),
            self.forecasts_table(),
            self.alpha_table(),
        ];
        tables.extend(self.figure_tables(&config.figures.focus));
        tables
    }
}

pub fn scenario_tables(paths: &ScenarioPaths) -> Vec<Table> {
    let mut gi = Table::new("scenario_gi", &["country", "scenario", "year", "gi", "band"], true);
    let mut pillars = Table::new(
        "scenario_pillars",
        &["country", "scenario", "year", "gi", "band", "irs", "lnsr", "ifc", "binding_pillar", "binding_score"],
        true,
    );
    for r in &paths.rows {
        let head = vec![
            r.country.as_str().into(),
            r.scenario.as_str().into(),
            r.year.into(),
            r.gi.into(),
            r.band.label().into(),
        ];
        gi.push(head.clone());
        let mut row = head;
        row.extend([r.irs.into(), r.lnsr.into(), r.ifc.into(), r.binding_pillar.name().into(), r.binding_score.into()]);
        pillars.push(row);
    }
    let mut skipped = Table::new("scenario_skipped", &["country", "reason"], false);
    for s in &paths.skipped {
        skipped.push(vec![s.country.as_str().into(), s.reason.as_str().into()]);
    }
    vec![gi, pillars, skipped]
}
