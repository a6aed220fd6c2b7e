//! Run configuration loaded from TOML. Unknown keys are rejected.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::composite::GiWeights;
use crate::error::{Error, Result};
use crate::ifc::{IfcConfig, IfcWeights, ZetaConfig, ZetaMode};
use crate::irs::{IrsConfig, IrsWeights};
use crate::lnsr::{LnsrConfig, LnsrWeights};
use crate::numerics::HmmConfig;
use crate::panel::BROAD_MONEY_GROWTH;
use crate::scaling::{BoundQuantiles, ScoreMode};
use crate::scenario::{Endpoints, GiMode, Horizon, ScenarioSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
    Both,
}

impl OutputFormat {
    pub fn csv(self) -> bool {
        matches!(self, OutputFormat::Csv | OutputFormat::Both)
    }

    pub fn json(self) -> bool {
        matches!(self, OutputFormat::Json | OutputFormat::Both)
    }
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            "both" => Ok(OutputFormat::Both),
            other => Err(Error::Config(format!("unknown format '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BoundsSection {
    pub lower: f64,
    pub upper: f64,
    /// `pooled` or `direct` scoring of the regression R².
    pub r_squared_mode: ScoreMode,
}

impl Default for BoundsSection {
    fn default() -> Self {
        let q = BoundQuantiles::default();
        Self { lower: q.lower, upper: q.upper, r_squared_mode: ScoreMode::Pooled }
    }
}

impl BoundsSection {
    pub fn quantiles(&self) -> BoundQuantiles {
        BoundQuantiles { lower: self.lower, upper: self.upper }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct WeightsSection {
    pub gi: GiWeights,
    pub irs: IrsWeights,
    pub lnsr: LnsrWeights,
    pub ifc: IfcWeights,
    /// Lower clamp applied to pillars before the geometric mean.
    pub epsilon_floor: f64,
}

impl Default for WeightsSection {
    fn default() -> Self {
        Self {
            gi: GiWeights::default(),
            irs: IrsWeights::default(),
            lnsr: LnsrWeights::default(),
            ifc: IfcWeights::default(),
            epsilon_floor: 0.0,
        }
    }
}

impl WeightsSection {
    pub fn validate(&self) -> Result<()> {
        self.gi.validate()?;
        let all = self
            .irs
            .as_array()
            .into_iter()
            .chain(self.lnsr.as_array())
            .chain(self.ifc.as_array());
        if all.into_iter().any(|w| !(w > 0.0 && w.is_finite())) {
            return Err(Error::Config("component weights must be positive".into()));
        }
        if !(self.epsilon_floor >= 0.0 && self.epsilon_floor < 100.0) {
            return Err(Error::Config(format!("epsilon_floor must be in [0, 100), got {}", self.epsilon_floor)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LnsrSection {
    pub mu_source: String,
}

impl Default for LnsrSection {
    fn default() -> Self {
        Self { mu_source: BROAD_MONEY_GROWTH.to_string() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct IfcSection {
    pub min_train: usize,
    pub t0: f64,
    pub scale: f64,
    pub smoothing_window: usize,
    pub zeta_mode: ZetaMode,
    pub alpha_min: f64,
    pub alpha_max: f64,
    pub alpha_step: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha_grid: Option<Vec<f64>>,
    pub validation_fraction: f64,
    pub hmm_max_iter: usize,
    pub hmm_tol: f64,
    pub hmm_variance_floor: f64,
    pub hmm_restarts: usize,
}

impl Default for IfcSection {
    fn default() -> Self {
        let ifc = IfcConfig::default();
        Self {
            min_train: ifc.min_train,
            t0: ifc.zeta.t0,
            scale: ifc.zeta.scale,
            smoothing_window: ifc.zeta.smoothing_window,
            zeta_mode: ifc.zeta.mode,
            alpha_min: ifc.alpha_min,
            alpha_max: ifc.alpha_max,
            alpha_step: ifc.alpha_step,
            alpha_grid: None,
            validation_fraction: ifc.validation_fraction,
            hmm_max_iter: ifc.hmm.max_iter,
            hmm_tol: ifc.hmm.tol,
            hmm_variance_floor: ifc.hmm.variance_floor,
            hmm_restarts: ifc.hmm.restarts,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EndpointEntry {
    pub country: String,
    pub gi: Option<[f64; 2]>,
    pub irs: Option<[f64; 2]>,
    pub lnsr: Option<[f64; 2]>,
    pub ifc: Option<[f64; 2]>,
}

impl From<&EndpointEntry> for Endpoints {
    fn from(e: &EndpointEntry) -> Self {
        let pair = |p: Option<[f64; 2]>| p.map(|[a, b]| (a, b));
        Endpoints { country: e.country.clone(), gi: pair(e.gi), irs: pair(e.irs), lnsr: pair(e.lnsr), ifc: pair(e.ifc) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScenarioSection {
    pub mode: GiMode,
    pub horizon: Horizon,
    /// CSV of `country,field,start_value,end_value`, relative to the config file.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub endpoints_file: Option<PathBuf>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub endpoints: Vec<EndpointEntry>,
    pub specs: Vec<ScenarioSpec>,
}

impl Default for ScenarioSection {
    fn default() -> Self {
        Self {
            mode: GiMode::RecomputeGi,
            horizon: Horizon::default(),
            endpoints_file: None,
            endpoints: Vec::new(),
            specs: ScenarioSpec::defaults(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FiguresSection {
    /// Country whose single-country figure series are written.
    pub focus: String,
}

impl Default for FiguresSection {
    fn default() -> Self {
        Self { focus: "GEO".into() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub seed: u64,
    pub cutoff: i32,
    /// Rolling window shared by LNSR and IFC.
    pub window: usize,
    pub format: OutputFormat,
    /// Full precision in CSV summary tables instead of two decimals.
    pub raw_precision: bool,
    pub bounds: BoundsSection,
    pub weights: WeightsSection,
    pub irs: IrsConfig,
    pub lnsr: LnsrSection,
    pub ifc: IfcSection,
    pub figures: FiguresSection,
    /// Region code to member ISO3 codes.
    pub regions: BTreeMap<String, Vec<String>>,
    pub scenario: ScenarioSection,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 42,
            cutoff: 2024,
            window: 5,
            format: OutputFormat::Csv,
            raw_precision: false,
            bounds: BoundsSection::default(),
            weights: WeightsSection::default(),
            irs: IrsConfig::default(),
            lnsr: LnsrSection::default(),
            ifc: IfcSection::default(),
            figures: FiguresSection::default(),
            regions: BTreeMap::new(),
            scenario: ScenarioSection::default(),
        }
    }
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let config: RunConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut config = Self::from_toml_str(&text)?;
        if let Some(file) = &config.scenario.endpoints_file {
            if file.is_relative() {
                let base = path.parent().unwrap_or(Path::new("."));
                config.scenario.endpoints_file = Some(base.join(file));
            }
        }
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if !(1900..=2200).contains(&self.cutoff) {
            return Err(Error::Config(format!("cutoff {} outside 1900-2200", self.cutoff)));
        }
        if !(3..=30).contains(&self.window) {
            return Err(Error::Config(format!("window must be in 3..=30, got {}", self.window)));
        }
        self.bounds.quantiles().validate()?;
        self.weights.validate()?;
        self.irs.validate()?;
        self.lnsr_config().validate()?;
        self.ifc_config().validate()?;
        if !(self.ifc.hmm_tol > 0.0) || !(self.ifc.hmm_variance_floor > 0.0) || self.ifc.hmm_max_iter == 0 {
            return Err(Error::Config("ifc HMM settings need positive tol, variance floor and iterations".into()));
        }
        self.scenario.horizon.validate()?;
        let mut names = std::collections::BTreeSet::new();
        for spec in &self.scenario.specs {
            spec.validate(&self.scenario.horizon)?;
            if !names.insert(spec.name.as_str()) {
                return Err(Error::Config(format!("duplicate scenario name '{}'", spec.name)));
            }
        }
        Ok(())
    }

    pub fn lnsr_config(&self) -> LnsrConfig {
        LnsrConfig { window: self.window, mu_source: self.lnsr.mu_source.clone() }
    }

    pub fn ifc_config(&self) -> IfcConfig {
        let s = &self.ifc;
        IfcConfig {
            min_train: s.min_train,
            window: self.window,
            zeta: ZetaConfig { t0: s.t0, scale: s.scale, smoothing_window: s.smoothing_window, mode: s.zeta_mode },
            alpha_min: s.alpha_min,
            alpha_max: s.alpha_max,
            alpha_step: s.alpha_step,
            alpha_grid: s.alpha_grid.clone(),
            validation_fraction: s.validation_fraction,
            hmm: HmmConfig {
                n_states: 2,
                max_iter: s.hmm_max_iter,
                tol: s.hmm_tol,
                variance_floor: s.hmm_variance_floor,
                seed: self.seed,
                restarts: s.hmm_restarts,
            },
        }
    }

    /// Endpoints from the configured file followed by inline entries.
    pub fn scenario_endpoints(&self) -> Result<Vec<Endpoints>> {
        let mut out = Vec::new();
        if let Some(path) = &self.scenario.endpoints_file {
            let file = std::fs::File::open(path)
                .map_err(|e| Error::Config(format!("cannot open endpoints file {}: {e}", path.display())))?;
            out = crate::scenario::parse_endpoints_csv(file)?;
        }
        for entry in &self.scenario.endpoints {
            if out.iter().any(|e| e.country == entry.country) {
                return Err(Error::Config(format!("endpoints for {} given twice", entry.country)));
            }
            out.push(entry.into());
        }
        Ok(out)
    }

    /// Flattened `dotted.key = value` view, used for the manifest echo.
    pub fn flattened(&self) -> BTreeMap<String, serde_json::Value> {
        let value = serde_json::to_value(self).expect("config serializes");
        let mut out = BTreeMap::new();
        flatten("", &value, &mut out);
        out
    }
}

fn flatten(prefix: &str, value: &serde_json::Value, out: &mut BTreeMap<String, serde_json::Value>) {
    match value {
        serde_json::Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, v, out);
            }
        }
        other => {
            out.insert(prefix.to_string(), other.clone());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_is_default() {
        assert_eq!(RunConfig::from_toml_str("").unwrap(), RunConfig::default());
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(RunConfig::from_toml_str("sede = 1").is_err());
        assert!(RunConfig::from_toml_str("[weights.gi]\nirs = 0.3\nlnsr = 0.3\nifc = 0.4\nextra = 1").is_err());
        assert!(RunConfig::from_toml_str("[ifc]\nwindow = 5").is_err());
    }

    #[test]
    fn ranges_checked() {
        assert!(RunConfig::from_toml_str("window = 1").is_err());
        assert!(RunConfig::from_toml_str("[bounds]\nlower = 0.9\nupper = 0.1").is_err());
        assert!(RunConfig::from_toml_str("[weights.gi]\nirs = 0\nlnsr = 0.3\nifc = 0.4").is_err());
        assert!(RunConfig::from_toml_str("[ifc]\nvalidation_fraction = 0").is_err());
        assert!(RunConfig::from_toml_str("[[scenario.specs]]\nname = \"X\"\npillar_shocks = [1]\ngi_shocks = [1]").is_err());
    }

    #[test]
    fn parses_full_sections() {
        let text = r#"
            seed = 7
            cutoff = 2022
            format = "both"
            [bounds]
            lower = 0.1
            upper = 0.9
            r_squared_mode = "direct"
            [weights]
            epsilon_floor = 0.01
            [weights.gi]
            irs = 0.4
            lnsr = 0.3
            ifc = 0.3
            [ifc]
            alpha_grid = [-1.0, 0.0, 1.0]
            [regions]
            EAS = ["CHN"]
            [scenario]
            mode = "table_replication"
            [[scenario.endpoints]]
            country = "USA"
            gi = [41.29, 40.90]
        "#;
        let c = RunConfig::from_toml_str(text).unwrap();
        assert_eq!(c.seed, 7);
        assert_eq!(c.ifc_config().hmm.seed, 7);
        assert_eq!(c.format, OutputFormat::Both);
        assert_eq!(c.bounds.r_squared_mode, ScoreMode::Direct);
        assert_eq!(c.regions["EAS"], vec!["CHN".to_string()]);
        assert_eq!(c.scenario.mode, GiMode::TableReplication);
        assert_eq!(c.scenario_endpoints().unwrap()[0].gi, Some((41.29, 40.90)));
        assert_eq!(c.ifc_config().alpha_grid().unwrap(), vec![-1.0, 0.0, 1.0]);
    }

    #[test]
    fn flattened_echo_isolates_changes() {
        let a = RunConfig::default().flattened();
        let mut changed = RunConfig::default();
        changed.weights.gi.irs = 0.5;
        let b = changed.flattened();
        let diff: Vec<&String> = a.keys().filter(|k| a[*k] != b[*k]).collect();
        assert_eq!(diff, vec!["weights.gi.irs"]);
    }
}
