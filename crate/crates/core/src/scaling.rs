//! Robust 0-100 scoring against pooled percentile bounds, the inversion
//! used for "bad" metrics, and weight-renormalizing aggregation.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::percentile_sorted;
use crate::reason::{Cell, Reason};

/// Percentile bounds of one metric over the pooled country-year panel.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingBounds {
    pub metric: String,
    pub p5: f64,
    pub p95: f64,
    pub pool_size: usize,
}

/// Quantile levels used for the bounds (p5/p95 unless reconfigured).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundQuantiles {
    pub lower: f64,
    pub upper: f64,
}

impl Default for BoundQuantiles {
    fn default() -> Self {
        Self { lower: 0.05, upper: 0.95 }
    }
}

impl BoundQuantiles {
    pub fn validate(&self) -> Result<()> {
        if !(0.0 <= self.lower && self.lower < self.upper && self.upper <= 1.0) {
            return Err(Error::Config(format!(
                "bound quantiles must satisfy 0 <= lower < upper <= 1, got {} / {}",
                self.lower, self.upper
            )));
        }
        Ok(())
    }
}

pub fn fit_bounds(pool: &[f64], metric: &str) -> Result<ScalingBounds> {
    fit_bounds_with(pool, metric, BoundQuantiles::default())
}

pub fn fit_bounds_with(pool: &[f64], metric: &str, q: BoundQuantiles) -> Result<ScalingBounds> {
    if pool.is_empty() {
        return Err(Error::Domain(format!("empty pool for metric '{metric}'")));
    }
    if pool.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain(format!("non-finite value in pool for '{metric}'")));
    }
    q.validate()?;
    let mut sorted = pool.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(ScalingBounds {
        metric: metric.to_string(),
        p5: percentile_sorted(&sorted, q.lower),
        p95: percentile_sorted(&sorted, q.upper),
        pool_size: pool.len(),
    })
}

/// A 0-100 score; `degenerate` marks bounds with `p5 == p95`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Scored {
    pub value: f64,
    pub degenerate: bool,
}

/// `100 (x - p5) / (p95 - p5)` clipped to `[0, 100]`; 50 for flat bounds.
pub fn score(x: f64, bounds: &ScalingBounds) -> Scored {
    let span = bounds.p95 - bounds.p5;
    if span <= 0.0 {
        return Scored { value: 50.0, degenerate: true };
    }
    Scored { value: (100.0 * (x - bounds.p5) / span).clamp(0.0, 100.0), degenerate: false }
}

/// Maps a non-negative "bad" magnitude into `(0, 1]`, decreasing.
pub fn invert_bad_metric(x: f64) -> Result<f64> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("inversion needs a finite non-negative input, got {x}")));
    }
    Ok(1.0 / (1.0 + x))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedComponent {
    pub value: Option<f64>,
    pub weight: f64,
}

impl WeightedComponent {
    pub fn new(value: Option<f64>, weight: f64) -> Self {
        Self { value, weight }
    }
}

/// Weighted mean over present components, weights rescaled to sum to 1.
/// `None` when every component is missing.
pub fn weighted_mean_renormalized(components: &[WeightedComponent]) -> Option<f64> {
    let (num, den) = components
        .iter()
        .filter_map(|c| c.value.map(|v| (v * c.weight, c.weight)))
        .fold((0.0, 0.0), |(n, d), (a, b)| (n + a, d + b));
    (den > 0.0).then(|| num / den)
}

/// How a metric's raw value becomes a score.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ScoreMode {
    /// Pooled percentile bounds.
    #[default]
    Pooled,
    /// Raw value already in `[0, 1]`; score is `100 x` clipped.
    Direct,
}

/// Bounds for every scored metric, keyed by metric id.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct BoundsSet {
    bounds: BTreeMap<String, ScalingBounds>,
    #[serde(skip)]
    direct: BTreeSet<String>,
}

impl BoundsSet {
    /// Fits bounds for each metric with a non-empty pool.
    pub fn fit(pools: &BTreeMap<String, Vec<f64>>, q: BoundQuantiles) -> Result<Self> {
        let mut bounds = BTreeMap::new();
        for (metric, pool) in pools {
            if !pool.is_empty() {
                bounds.insert(metric.clone(), fit_bounds_with(pool, metric, q)?);
            }
        }
        Ok(Self { bounds, direct: BTreeSet::new() })
    }

    pub fn set_direct(&mut self, metric: &str) {
        self.direct.insert(metric.to_string());
    }

    pub fn get(&self, metric: &str) -> Option<&ScalingBounds> {
        self.bounds.get(metric)
    }

    pub fn insert(&mut self, bounds: ScalingBounds) {
        self.bounds.insert(bounds.metric.clone(), bounds);
    }

    pub fn iter(&self) -> impl Iterator<Item = &ScalingBounds> {
        self.bounds.values()
    }

    /// Scores `x` for `metric`; `None` when the metric has no bounds.
    pub fn score(&self, metric: &str, x: f64) -> Option<Scored> {
        if self.direct.contains(metric) {
            return Some(Scored { value: (100.0 * x).clamp(0.0, 100.0), degenerate: false });
        }
        self.bounds.get(metric).map(|b| score(x, b))
    }

    pub fn is_direct(&self, metric: &str) -> bool {
        self.direct.contains(metric)
    }
}

/// Score of one component together with its degeneracy flag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScoreCell {
    pub score: Cell,
    pub degenerate: bool,
}

/// Scores a raw cell; absence of the raw value carries through.
pub fn score_cell(bounds: &BoundsSet, metric: &str, raw: Cell) -> ScoreCell {
    match raw {
        Err(reason) => ScoreCell { score: Err(reason), degenerate: false },
        Ok(x) => match bounds.score(metric, x) {
            Some(s) => ScoreCell { score: Ok(s.value), degenerate: s.degenerate },
            None => ScoreCell { score: Err(Reason::MissingInput), degenerate: false },
        },
    }
}

/// Renormalized weighted mean of scored components.
pub fn aggregate_scores(scores: &[ScoreCell], weights: &[f64]) -> Cell {
    let comps: Vec<WeightedComponent> = scores
        .iter()
        .zip(weights)
        .map(|(s, &w)| WeightedComponent::new(s.score.ok(), w))
        .collect();
    weighted_mean_renormalized(&comps).ok_or(Reason::AllComponentsMissing)
}
