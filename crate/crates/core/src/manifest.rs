//! Run manifest: input digest, configuration echo, engine version and the
//! standing disclosures about reference values.

use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::RunConfig;
use crate::pipeline::RunOutput;
use crate::scenario::SkippedCountry;

pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

pub const DISCLOSURES: [&str; 2] = [
    "GI is the weighted geometric mean of the three pillars. Reference GI levels published next to their pillar \
     levels are not recoverable this way: pillars (67.42, 73.20, 14.68) aggregate to 43.9 against a reported 52.52, \
     and (69.02, 74.40, 16.08) aggregate to 45.8 against 54.73.",
    "Scenario bands are 0-25, 25-50, 50-75 and 75-100 with half-open intervals. A second reading scale \
     (0-40, 40-60, 60-80, 80-100) is in circulation for the same index and conflicts with these bands; it is not used.",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub bytes: usize,
    pub sha256: String,
}

impl InputDigest {
    pub fn of(path: &str, contents: &[u8]) -> Self {
        Self { path: path.to_string(), bytes: contents.len(), sha256: hex::encode(Sha256::digest(contents)) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SkipNote {
    pub country: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Manifest {
    pub engine: &'static str,
    pub version: &'static str,
    pub generated_at_unix: u64,
    pub seed: u64,
    pub cutoff: i32,
    pub input: Option<InputDigest>,
    pub config: std::collections::BTreeMap<String, serde_json::Value>,
    pub countries: Vec<String>,
    pub derivation_warnings: Vec<String>,
    pub skipped: Vec<SkipNote>,
    pub disclosures: Vec<&'static str>,
}

impl Manifest {
    pub fn new(config: &RunConfig, input: Option<InputDigest>) -> Self {
        Self {
            engine: "gi",
            version: ENGINE_VERSION,
            generated_at_unix: SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()),
            seed: config.seed,
            cutoff: config.cutoff,
            input,
            config: config.flattened(),
            countries: Vec::new(),
            derivation_warnings: Vec::new(),
            skipped: Vec::new(),
            disclosures: DISCLOSURES.to_vec(),
        }
    }

    /// Records countries, warnings and countries without any GI value.
    pub fn with_run(mut self, run: &RunOutput) -> Self {
        self.countries = run.countries.iter().map(|c| c.country.clone()).collect();
        self.derivation_warnings = run
            .warnings
            .iter()
            .map(|w| format!("{} {} {}: {}", w.country, w.year, w.indicator, w.message))
            .collect();
        for c in &run.countries {
            if c.years.iter().all(|r| r.gi.is_err()) {
                self.skipped.push(SkipNote { country: c.country.clone(), reason: "no GI value in any year".into() });
            }
        }
        self
    }

    pub fn with_scenario_skips(mut self, skipped: &[SkippedCountry]) -> Self {
        self.skipped.extend(
            skipped.iter().map(|s| SkipNote { country: s.country.clone(), reason: format!("scenario: {}", s.reason) }),
        );
        self
    }

    pub fn to_json(&self) -> crate::Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }
}
