//! Scenario pathways: linear baseline between horizon endpoints, clipped
//! additive shocks, band labels and the binding (weakest) pillar.

use std::fmt;
use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::composite::{aggregate_gi, GiWeights};
use crate::error::{Error, Result};
use crate::reason::Reason;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Horizon {
    pub start: i32,
    pub end: i32,
}

impl Default for Horizon {
    fn default() -> Self {
        Self { start: 2026, end: 2030 }
    }
}

impl Horizon {
    pub fn validate(&self) -> Result<()> {
        if self.end <= self.start {
            return Err(Error::Config(format!("scenario horizon {}..{} is empty", self.start, self.end)));
        }
        Ok(())
    }

    pub fn years(&self) -> impl Iterator<Item = i32> {
        self.start..=self.end
    }

    pub fn len(&self) -> usize {
        (self.end - self.start + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.end < self.start
    }

    /// `v_start + (year - start) / (end - start) * (v_end - v_start)`.
    pub fn interpolate(&self, v_start: f64, v_end: f64, year: i32) -> Result<f64> {
        if year < self.start || year > self.end {
            return Err(Error::Domain(format!("year {year} outside horizon {}-{}", self.start, self.end)));
        }
        let span = f64::from(self.end - self.start);
        Ok(v_start + f64::from(year - self.start) / span * (v_end - v_start))
    }
}

/// Linear path between the 2026 and 2030 endpoints.
pub fn interpolate_baseline(v2026: f64, v2030: f64, year: i32) -> Result<f64> {
    Horizon::default().interpolate(v2026, v2030, year)
}

pub fn apply_shock(base: f64, shock: f64) -> f64 {
    (base + shock).clamp(0.0, 100.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Pillar {
    Irs,
    Lnsr,
    Ifc,
}

impl Pillar {
    pub const ALL: [Pillar; 3] = [Pillar::Irs, Pillar::Lnsr, Pillar::Ifc];

    pub fn name(self) -> &'static str {
        match self {
            Pillar::Irs => "IRS",
            Pillar::Lnsr => "LNSR",
            Pillar::Ifc => "IFC",
        }
    }
}

impl fmt::Display for Pillar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Weakest pillar and its value; ties resolve in IRS, LNSR, IFC order.
pub fn binding_pillar(irs: f64, lnsr: f64, ifc: f64) -> (Pillar, f64) {
    let mut best = (Pillar::Irs, irs);
    for (p, v) in [(Pillar::Lnsr, lnsr), (Pillar::Ifc, ifc)] {
        if v < best.1 {
            best = (p, v);
        }
    }
    best
}

/// Missing-aware variant of [`binding_pillar`].
pub fn binding_pillar_checked(pillars: [Option<f64>; 3]) -> Result<(Pillar, f64), Reason> {
    match pillars {
        [Some(a), Some(b), Some(c)] => Ok(binding_pillar(a, b, c)),
        _ => Err(Reason::MissingInput),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Band {
    VeryLow,
    Low,
    Moderate,
    High,
}

impl Band {
    pub fn label(self) -> &'static str {
        match self {
            Band::VeryLow => "0–25",
            Band::Low => "25–50",
            Band::Moderate => "50–75",
            Band::High => "75–100",
        }
    }
}

impl fmt::Display for Band {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Half-open bands `[0,25) [25,50) [50,75) [75,100]`.
pub fn classify_band(gi: f64) -> Result<Band> {
    if !(0.0..=100.0).contains(&gi) {
        return Err(Error::Domain(format!("GI {gi} outside [0, 100]")));
    }
    Ok(if gi < 25.0 {
        Band::VeryLow
    } else if gi < 50.0 {
        Band::Low
    } else if gi < 75.0 {
        Band::Moderate
    } else {
        Band::High
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum GiMode {
    /// GI re-aggregated from the shocked pillars.
    #[default]
    RecomputeGi,
    /// GI path interpolated from its own endpoints and shocked directly.
    TableReplication,
}

impl GiMode {
    pub fn name(self) -> &'static str {
        match self {
            GiMode::RecomputeGi => "recompute_gi",
            GiMode::TableReplication => "table_replication",
        }
    }
}

impl std::str::FromStr for GiMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "recompute_gi" => Ok(GiMode::RecomputeGi),
            "table_replication" => Ok(GiMode::TableReplication),
            other => Err(Error::Config(format!("unknown scenario mode '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSpec {
    pub name: String,
    /// One offset per horizon year, applied to every pillar.
    pub pillar_shocks: Vec<f64>,
    /// One offset per horizon year, applied to the GI path in table mode.
    pub gi_shocks: Vec<f64>,
}

impl ScenarioSpec {
    pub fn baseline(horizon: &Horizon) -> Self {
        Self { name: "Baseline".into(), pillar_shocks: vec![0.0; horizon.len()], gi_shocks: vec![0.0; horizon.len()] }
    }

    pub fn adverse() -> Self {
        Self {
            name: "Adverse".into(),
            pillar_shocks: vec![-5.0, -6.0, -7.0, -7.5, -8.0],
            gi_shocks: vec![-4.0, -5.0, -6.0, -6.5, -7.0],
        }
    }

    pub fn optimistic() -> Self {
        let shocks = vec![4.0, 4.5, 5.0, 5.5, 6.0];
        Self { name: "Optimistic".into(), pillar_shocks: shocks.clone(), gi_shocks: shocks }
    }

    pub fn defaults() -> Vec<Self> {
        vec![Self::baseline(&Horizon::default()), Self::adverse(), Self::optimistic()]
    }

    pub fn validate(&self, horizon: &Horizon) -> Result<()> {
        let n = horizon.len();
        if self.pillar_shocks.len() != n || self.gi_shocks.len() != n {
            return Err(Error::Config(format!(
                "scenario '{}' needs {n} shocks per list, got {} pillar / {} GI",
                self.name,
                self.pillar_shocks.len(),
                self.gi_shocks.len()
            )));
        }
        if self.pillar_shocks.iter().chain(&self.gi_shocks).any(|s| !s.is_finite()) {
            return Err(Error::Config(format!("scenario '{}' has a non-finite shock", self.name)));
        }
        if self.name.eq_ignore_ascii_case("baseline") && self.pillar_shocks.iter().chain(&self.gi_shocks).any(|&s| s != 0.0) {
            return Err(Error::Config("Baseline shocks must all be 0".into()));
        }
        Ok(())
    }
}

/// Start and end values of each path for one country.
#[derive(Debug, Clone, PartialEq, Serialize, Default)]
pub struct Endpoints {
    pub country: String,
    pub gi: Option<(f64, f64)>,
    pub irs: Option<(f64, f64)>,
    pub lnsr: Option<(f64, f64)>,
    pub ifc: Option<(f64, f64)>,
}

impl Endpoints {
    fn pillars(&self) -> [Option<(f64, f64)>; 3] {
        [self.irs, self.lnsr, self.ifc]
    }
}

/// Reads `country,field,start_value,end_value` rows, field one of
/// `gi`, `irs`, `lnsr`, `ifc`. Countries keep first-seen order.
pub fn parse_endpoints_csv<R: Read>(reader: R) -> Result<Vec<Endpoints>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    if header != ["country", "field", "start_value", "end_value"] {
        return Err(Error::Parse { line: 1, message: format!("unexpected endpoint header {header:?}") });
    }
    let mut out: Vec<Endpoints> = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let line = i as u64 + 2;
        let record = record?;
        if record.len() != 4 {
            return Err(Error::Parse { line, message: format!("expected 4 columns, got {}", record.len()) });
        }
        let num = |s: &str| {
            s.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::Parse { line, message: format!("invalid number '{s}'") })
        };
        let pair = Some((num(&record[2])?, num(&record[3])?));
        let country = record[0].to_string();
        let idx = match out.iter().position(|e| e.country == country) {
            Some(i) => i,
            None => {
                out.push(Endpoints { country, ..Default::default() });
                out.len() - 1
            }
        };
        let e = &mut out[idx];
        let slot = match record[1].to_ascii_lowercase().as_str() {
            "gi" => &mut e.gi,
            "irs" => &mut e.irs,
            "lnsr" => &mut e.lnsr,
            "ifc" => &mut e.ifc,
            other => return Err(Error::Parse { line, message: format!("unknown endpoint field '{other}'") }),
        };
        if slot.is_some() {
            return Err(Error::Parse { line, message: format!("duplicate endpoint for {} {}", e.country, &record[1]) });
        }
        *slot = pair;
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioRow {
    pub country: String,
    pub scenario: String,
    pub year: i32,
    pub gi: f64,
    pub band: Band,
    pub irs: f64,
    pub lnsr: f64,
    pub ifc: f64,
    pub binding_pillar: Pillar,
    pub binding_score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SkippedCountry {
    pub country: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioPaths {
    pub mode: GiMode,
    pub rows: Vec<ScenarioRow>,
    pub skipped: Vec<SkippedCountry>,
}

pub struct ScenarioSettings<'a> {
    pub horizon: Horizon,
    pub specs: &'a [ScenarioSpec],
    pub mode: GiMode,
    pub weights: GiWeights,
    pub epsilon_floor: f64,
}

/// Rows ordered by input country order, then spec order, then year.
pub fn build_scenario_paths(endpoints: &[Endpoints], settings: &ScenarioSettings<'_>) -> Result<ScenarioPaths> {
    let h = settings.horizon;
    h.validate()?;
    for spec in settings.specs {
        spec.validate(&h)?;
    }
    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    for e in endpoints {
        let missing: Vec<&str> = e
            .pillars()
            .iter()
            .zip(Pillar::ALL)
            .filter(|(p, _)| p.is_none())
            .map(|(_, p)| p.name())
            .chain((settings.mode == GiMode::TableReplication && e.gi.is_none()).then_some("GI"))
            .collect();
        if !missing.is_empty() {
            let reason = format!("missing endpoints: {}", missing.join(", "));
            log::warn!("{}: {reason}; skipped", e.country);
            skipped.push(SkippedCountry { country: e.country.clone(), reason });
            continue;
        }
        let ends = e.pillars().map(|p| p.expect("checked above"));
        for spec in settings.specs {
            for (k, year) in h.years().enumerate() {
                let mut p = [0.0; 3];
                for i in 0..3 {
                    let base = h.interpolate(ends[i].0, ends[i].1, year)?;
                    p[i] = apply_shock(base, spec.pillar_shocks[k]);
                }
                let gi = match settings.mode {
                    GiMode::RecomputeGi => aggregate_gi(p.map(Some), &settings.weights, settings.epsilon_floor)
                        .ok_or_else(|| Error::Invariant("GI absent with all pillars present".into()))?,
                    GiMode::TableReplication => {
                        let (a, b) = e.gi.expect("checked above");
                        apply_shock(h.interpolate(a, b, year)?, spec.gi_shocks[k])
                    }
                };
                let (binding, score) = binding_pillar(p[0], p[1], p[2]);
                rows.push(ScenarioRow {
                    country: e.country.clone(),
                    scenario: spec.name.clone(),
                    year,
                    gi,
                    band: classify_band(gi)?,
                    irs: p[0],
                    lnsr: p[1],
                    ifc: p[2],
                    binding_pillar: binding,
                    binding_score: score,
                });
            }
        }
    }
    Ok(ScenarioPaths { mode: settings.mode, rows, skipped })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolation_examples() {
        assert!((interpolate_baseline(41.29, 40.90, 2028).unwrap() - 41.095).abs() < 1e-12);
        assert!((interpolate_baseline(54.73, 59.00, 2028).unwrap() - 56.89).abs() < 0.05);
        assert_eq!(interpolate_baseline(12.5, 12.5, 2029).unwrap(), 12.5);
        assert_eq!(interpolate_baseline(1.0, 2.0, 2026).unwrap(), 1.0);
        assert_eq!(interpolate_baseline(1.0, 2.0, 2030).unwrap(), 2.0);
        assert!(interpolate_baseline(1.0, 2.0, 2031).is_err());
        assert!(interpolate_baseline(1.0, 2.0, 2025).is_err());
    }

    #[test]
    fn shock_examples() {
        assert!((apply_shock(41.29, -4.0) - 37.29).abs() < 1e-12);
        assert_eq!(apply_shock(2.0, -5.0), 0.0);
        assert_eq!(apply_shock(98.0, 5.0), 100.0);
    }

    #[test]
    fn binding_examples() {
        assert_eq!(binding_pillar(69.02, 74.40, 16.08), (Pillar::Ifc, 16.08));
        assert_eq!(binding_pillar(8.50, 83.64, 14.33), (Pillar::Irs, 8.50));
        assert_eq!(binding_pillar(30.0, 30.0, 50.0), (Pillar::Irs, 30.0));
        assert_eq!(binding_pillar(40.0, 30.0, 30.0), (Pillar::Lnsr, 30.0));
        assert_eq!(binding_pillar_checked([Some(1.0), None, Some(2.0)]), Err(Reason::MissingInput));
    }

    #[test]
    fn band_examples() {
        assert_eq!(classify_band(50.03).unwrap().label(), "50–75");
        assert_eq!(classify_band(49.93).unwrap().label(), "25–50");
        assert_eq!(classify_band(0.0).unwrap().label(), "0–25");
        assert_eq!(classify_band(100.0).unwrap().label(), "75–100");
        assert_eq!(classify_band(75.0).unwrap(), Band::High);
        assert!(classify_band(100.01).is_err());
        assert!(classify_band(-0.1).is_err());
        assert!(classify_band(f64::NAN).is_err());
    }

    #[test]
    fn band_monotone() {
        let mut prev = Band::VeryLow;
        for k in 0..=10_000 {
            let b = classify_band(k as f64 / 100.0).unwrap();
            assert!(b >= prev);
            prev = b;
        }
    }

    fn georgia() -> Endpoints {
        Endpoints {
            country: "GEO".into(),
            gi: Some((54.73, 59.00)),
            irs: Some((69.02, 72.22)),
            lnsr: Some((74.40, 76.80)),
            ifc: Some((16.08, 18.88)),
        }
    }

    fn settings(specs: &[ScenarioSpec], mode: GiMode) -> ScenarioSettings<'_> {
        ScenarioSettings { horizon: Horizon::default(), specs, mode, weights: GiWeights::default(), epsilon_floor: 0.0 }
    }

    #[test]
    fn table_mode_shocks_gi_directly() {
        let specs = ScenarioSpec::defaults();
        let out = build_scenario_paths(&[georgia()], &settings(&specs, GiMode::TableReplication)).unwrap();
        assert_eq!(out.rows.len(), 15);
        let adverse = out.rows.iter().find(|r| r.scenario == "Adverse" && r.year == 2026).unwrap();
        assert!((adverse.gi - 50.73).abs() < 1e-12);
        assert!((adverse.irs - 64.02).abs() < 1e-12);
        assert_eq!(adverse.binding_pillar, Pillar::Ifc);
        assert!((adverse.binding_score - 11.08).abs() < 1e-12);
    }

    #[test]
    fn baseline_is_linear_and_ordered() {
        let specs = ScenarioSpec::defaults();
        let out = build_scenario_paths(&[georgia()], &settings(&specs, GiMode::RecomputeGi)).unwrap();
        let path = |name: &str| out.rows.iter().filter(|r| r.scenario == name).cloned().collect::<Vec<_>>();
        let (base, adv, opt) = (path("Baseline"), path("Adverse"), path("Optimistic"));
        for w in base.windows(3) {
            for f in [|r: &ScenarioRow| r.irs, |r: &ScenarioRow| r.lnsr, |r: &ScenarioRow| r.ifc] {
                assert!((f(&w[2]) - 2.0 * f(&w[1]) + f(&w[0])).abs() < 1e-12);
            }
        }
        for k in 0..5 {
            assert!(opt[k].gi >= base[k].gi && base[k].gi >= adv[k].gi);
            let expected = aggregate_gi([Some(base[k].irs), Some(base[k].lnsr), Some(base[k].ifc)], &GiWeights::default(), 0.0);
            assert_eq!(Some(base[k].gi), expected);
        }
        for r in &out.rows {
            assert_eq!(r.binding_score, r.irs.min(r.lnsr).min(r.ifc));
        }
    }

    #[test]
    fn missing_endpoints_skip_country() {
        let mut e = georgia();
        e.ifc = None;
        let specs = ScenarioSpec::defaults();
        let out = build_scenario_paths(&[e], &settings(&specs, GiMode::RecomputeGi)).unwrap();
        assert!(out.rows.is_empty());
        assert_eq!(out.skipped[0].reason, "missing endpoints: IFC");

        let mut e = georgia();
        e.gi = None;
        assert_eq!(build_scenario_paths(&[e.clone()], &settings(&specs, GiMode::RecomputeGi)).unwrap().rows.len(), 15);
        assert_eq!(build_scenario_paths(&[e], &settings(&specs, GiMode::TableReplication)).unwrap().skipped.len(), 1);
    }

    #[test]
    fn spec_validation() {
        let h = Horizon::default();
        assert!(ScenarioSpec::adverse().validate(&h).is_ok());
        let short = ScenarioSpec { pillar_shocks: vec![1.0], ..ScenarioSpec::optimistic() };
        assert!(short.validate(&h).is_err());
        let bad = ScenarioSpec { name: "Baseline".into(), ..ScenarioSpec::optimistic() };
        assert!(bad.validate(&h).is_err());
    }

    #[test]
    fn endpoint_csv() {
        let text = "country,field,start_value,end_value\nGEO,gi,54.73,59.00\nGEO,irs,69.02,72.22\nUSA,GI,41.29,40.90\n";
        let e = parse_endpoints_csv(text.as_bytes()).unwrap();
        assert_eq!(e.len(), 2);
        assert_eq!(e[0].irs, Some((69.02, 72.22)));
        assert_eq!(e[1].gi, Some((41.29, 40.90)));
        assert!(parse_endpoints_csv("country,field,start_value,end_value\nGEO,xyz,1,2\n".as_bytes()).is_err());
        assert!(parse_endpoints_csv("country,field,start_value,end_value\nGEO,gi,1,2\nGEO,gi,1,2\n".as_bytes()).is_err());
        assert!(parse_endpoints_csv("a,b\n".as_bytes()).is_err());
    }
}
