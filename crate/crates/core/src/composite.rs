//! Composite index: weighted geometric mean of the three pillars, its
//! log-change decomposition, regional proxies and descriptive statistics.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{mean, sample_variance};
use crate::reason::{Cell, Reason};
use crate::series::TimeSeries;

pub const PILLARS: [&str; 3] = ["IRS", "LNSR", "IFC"];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GiWeights {
    pub irs: f64,
    pub lnsr: f64,
    pub ifc: f64,
}

impl Default for GiWeights {
    fn default() -> Self {
        Self { irs: 0.35, lnsr: 0.35, ifc: 0.30 }
    }
}

impl GiWeights {
    pub fn validate(&self) -> Result<()> {
        if self.as_array().iter().any(|w| !(*w > 0.0 && w.is_finite())) {
            return Err(Error::Config(format!("pillar weights must be positive, got {self:?}")));
        }
        Ok(())
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.irs, self.lnsr, self.ifc]
    }

    pub fn total(&self) -> f64 {
        self.irs + self.lnsr + self.ifc
    }
}

/// `exp(sum w_i' ln max(p_i, floor))` over present pillars, with weights
/// rescaled to sum to one. A zero pillar with a zero floor gives 0.
pub fn aggregate_gi(pillars: [Option<f64>; 3], weights: &GiWeights, epsilon_floor: f64) -> Option<f64> {
    let present: Vec<(f64, f64)> = pillars
        .iter()
        .zip(weights.as_array())
        .filter_map(|(p, w)| p.map(|p| (p.max(epsilon_floor), w)))
        .collect();
    if present.is_empty() {
        return None;
    }
    if present.iter().any(|&(p, _)| p <= 0.0) {
        return Some(0.0);
    }
    let total: f64 = present.iter().map(|p| p.1).sum();
    let log_mean: f64 = present.iter().map(|&(p, w)| w / total * p.ln()).sum();
    Some(log_mean.exp())
}

/// Present/absent pattern of the pillars entering a GI value.
pub fn present_mask(pillars: [Option<f64>; 3]) -> String {
    pillars
        .iter()
        .zip(PILLARS)
        .filter(|(p, _)| p.is_some())
        .map(|(_, name)| name)
        .collect::<Vec<_>>()
        .join("+")
}

/// Contributions `(w_i / W) * d ln pillar_i`, which sum to `d ln GI`.
pub fn decompose_dlog(prev: [Cell; 3], curr: [Cell; 3], weights: &GiWeights) -> Result<[f64; 3], Reason> {
    let w = weights.as_array();
    let total = weights.total();
    let mut out = [0.0; 3];
    for i in 0..3 {
        let (a, b) = (prev[i]?, curr[i]?);
        if a <= 0.0 || b <= 0.0 {
            return Err(Reason::NonPositive);
        }
        out[i] = w[i] / total * (b.ln() - a.ln());
    }
    Ok(out)
}

/// One field of a regional proxy row: the mean and how many members had it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegionalField {
    pub mean: Option<f64>,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionalRow {
    pub region: String,
    pub members: usize,
    pub gi: RegionalField,
    pub irs: RegionalField,
    pub lnsr: RegionalField,
    pub ifc: RegionalField,
}

/// Member values used for a regional proxy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MemberValues {
    pub gi: Option<f64>,
    pub irs: Option<f64>,
    pub lnsr: Option<f64>,
    pub ifc: Option<f64>,
}

/// Field-wise arithmetic mean over the members that have each field.
pub fn regional_mean(region: &str, members: &[MemberValues]) -> RegionalRow {
    let field = |get: fn(&MemberValues) -> Option<f64>| {
        let xs: Vec<f64> = members.iter().filter_map(get).collect();
        RegionalField { mean: (!xs.is_empty()).then(|| mean(&xs)), n: xs.len() }
    };
    RegionalRow {
        region: region.to_string(),
        members: members.len(),
        gi: field(|m| m.gi),
        irs: field(|m| m.irs),
        lnsr: field(|m| m.lnsr),
        ifc: field(|m| m.ifc),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DescriptiveStats {
    pub n: usize,
    pub mean: f64,
    /// Sample standard deviation; absent for a single value.
    pub std: Option<f64>,
    pub min: f64,
    pub max: f64,
    /// Latest present value.
    pub last: f64,
    pub last_year: i32,
}

pub fn descriptive_stats(series: &TimeSeries) -> Option<DescriptiveStats> {
    let present: Vec<(i32, f64)> = series.present().collect();
    let &(last_year, last) = present.last()?;
    let xs: Vec<f64> = present.iter().map(|p| p.1).collect();
    Some(DescriptiveStats {
        n: xs.len(),
        mean: mean(&xs),
        std: (xs.len() >= 2).then(|| sample_variance(&xs).sqrt()),
        min: xs.iter().copied().fold(f64::INFINITY, f64::min),
        max: xs.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        last,
        last_year,
    })
}
