//! Country-year indicator panel: long-format CSV ingestion, derived
//! indicators and vintage snapshots.
//!
//! Input rows look like `country_iso3,country_name,year,indicator,value`,
//! keyed by WDI code. A blank `value` cell is a missing observation and is
//! never stored as a number.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::{Read, Write};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::series::TimeSeries;

pub const INFLATION: &str = "FP.CPI.TOTL.ZG";
pub const GDP_GROWTH: &str = "NY.GDP.MKTP.KD.ZG";
pub const UNEMPLOYMENT: &str = "SL.UEM.TOTL.ZS";
pub const BROAD_MONEY_GDP: &str = "FM.LBL.BMNY.GD.ZS";
pub const GDP_PER_CAPITA: &str = "NY.GDP.PCAP.CD";
pub const GINI: &str = "SI.POV.GINI";
pub const BROAD_MONEY_LEVEL: &str = "BROAD_MONEY_LEVEL";
pub const BROAD_MONEY_GROWTH: &str = "BROAD_MONEY_GROWTH";
/// Natural log of GDP per capita, filled by [`derive_indicators`].
pub const LOG_GDP_PER_CAPITA: &str = "LOG_GDPPC";

const HEADER: [&str; 5] = ["country_iso3", "country_name", "year", "indicator", "value"];

/// A registered indicator code.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct IndicatorKey(String);

impl IndicatorKey {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for IndicatorKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Set of indicator codes the panel accepts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndicatorRegistry {
    codes: BTreeSet<String>,
}

impl Default for IndicatorRegistry {
    fn default() -> Self {
        let codes = [
            INFLATION,
            GDP_GROWTH,
            UNEMPLOYMENT,
            BROAD_MONEY_GDP,
            GDP_PER_CAPITA,
            GINI,
            BROAD_MONEY_LEVEL,
            BROAD_MONEY_GROWTH,
            LOG_GDP_PER_CAPITA,
        ];
        Self { codes: codes.iter().map(|c| c.to_string()).collect() }
    }
}

impl IndicatorRegistry {
    /// Registers an extra code, e.g. a substitute broad-money series.
    pub fn register(&mut self, code: &str) {
        self.codes.insert(code.to_string());
    }

    pub fn key(&self, code: &str) -> Result<IndicatorKey> {
        if self.codes.contains(code) {
            Ok(IndicatorKey(code.to_string()))
        } else {
            Err(Error::Lookup(format!("unregistered indicator '{code}'")))
        }
    }

    pub fn contains(&self, code: &str) -> bool {
        self.codes.contains(code)
    }
}

/// One stored country-year value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Observation {
    pub country: String,
    pub year: i32,
    pub indicator: IndicatorKey,
    pub value: f64,
}

/// Immutable country-year panel.
#[derive(Debug, Clone, PartialEq)]
pub struct Panel {
    registry: IndicatorRegistry,
    countries: Vec<String>,
    names: BTreeMap<String, String>,
    first_year: i32,
    last_year: i32,
    data: BTreeMap<(String, IndicatorKey), BTreeMap<i32, f64>>,
    // Rows that arrived with a blank value cell; kept so re-serialization
    // reproduces the same panel.
    blanks: BTreeSet<(String, i32, IndicatorKey)>,
}

/// Snapshot entry: value and the year it was observed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Vintage {
    pub value: f64,
    pub source_year: i32,
}

/// Non-fatal problem found while deriving indicators.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivationWarning {
    pub country: String,
    pub year: i32,
    pub indicator: &'static str,
    pub message: String,
}

fn valid_iso3(code: &str) -> bool {
    code.len() == 3 && code.bytes().all(|b| b.is_ascii_uppercase() || b.is_ascii_digit())
}

/// Parses the long-format panel CSV.
pub fn parse_panel_csv<R: Read>(reader: R, registry: &IndicatorRegistry) -> Result<Panel> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);

    let header = rdr.headers()?.clone();
    if header.iter().collect::<Vec<_>>() != HEADER {
        return Err(Error::Parse {
            line: 1,
            message: format!("expected header '{}'", HEADER.join(",")),
        });
    }

    let mut builder = PanelBuilder::new(registry.clone());
    for record in rdr.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        let bad = |message: String| Error::Parse { line, message };
        if record.len() != HEADER.len() {
            return Err(bad(format!("expected 5 columns, found {}", record.len())));
        }
        let country = &record[0];
        if !valid_iso3(country) {
            return Err(bad(format!("invalid ISO3 code '{country}'")));
        }
        let year: i32 = record[2]
            .parse()
            .map_err(|_| bad(format!("non-numeric year '{}'", &record[2])))?;
        let indicator = registry
            .key(&record[3])
            .map_err(|_| bad(format!("unregistered indicator '{}'", &record[3])))?;
        let value = match &record[4] {
            "" => None,
            raw => {
                let v: f64 = raw.parse().map_err(|_| bad(format!("non-numeric value '{raw}'")))?;
                if !v.is_finite() {
                    return Err(bad(format!("non-finite value '{raw}'")));
                }
                Some(v)
            }
        };
        builder.insert(country, &record[1], year, indicator, value)?;
    }
    builder.finish()
}

/// Writes the panel back in the input CSV format, rows ordered by
/// country, year, indicator.
pub fn write_panel_csv<W: Write>(panel: &Panel, writer: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    wtr.write_record(HEADER)?;
    let mut rows: BTreeMap<(&str, i32, &IndicatorKey), Option<f64>> = BTreeMap::new();
    for ((country, key), years) in &panel.data {
        for (&year, &value) in years {
            rows.insert((country, year, key), Some(value));
        }
    }
    for (country, year, key) in &panel.blanks {
        rows.entry((country, *year, key)).or_insert(None);
    }
    for ((country, year, key), value) in rows {
        let name = panel.names.get(country).map_or("", String::as_str);
        let value = value.map(|v| v.to_string()).unwrap_or_default();
        wtr.write_record([country, name, &year.to_string(), key.as_str(), &value])?;
    }
    wtr.flush()?;
    Ok(())
}

struct PanelBuilder {
    registry: IndicatorRegistry,
    names: BTreeMap<String, String>,
    years: Option<(i32, i32)>,
    data: BTreeMap<(String, IndicatorKey), BTreeMap<i32, f64>>,
    blanks: BTreeSet<(String, i32, IndicatorKey)>,
}

impl PanelBuilder {
    fn new(registry: IndicatorRegistry) -> Self {
        Self {
            registry,
            names: BTreeMap::new(),
            years: None,
            data: BTreeMap::new(),
            blanks: BTreeSet::new(),
        }
    }

    fn insert(
        &mut self,
        country: &str,
        name: &str,
        year: i32,
        indicator: IndicatorKey,
        value: Option<f64>,
    ) -> Result<()> {
        self.names.entry(country.to_string()).or_insert_with(|| name.to_string());
        self.years = Some(match self.years {
            None => (year, year),
            Some((lo, hi)) => (lo.min(year), hi.max(year)),
        });
        let Some(value) = value else {
            self.blanks.insert((country.to_string(), year, indicator));
            return Ok(());
        };
        let slot = self.data.entry((country.to_string(), indicator.clone())).or_default();
        match slot.get(&year) {
            Some(&prev) if prev != value => Err(Error::Conflict {
                country: country.to_string(),
                year,
                indicator: indicator.to_string(),
                first: prev,
                second: value,
            }),
            _ => {
                slot.insert(year, value);
                Ok(())
            }
        }
    }

    fn finish(mut self) -> Result<Panel> {
        let (first_year, last_year) =
            self.years.ok_or_else(|| Error::Domain("panel has no rows".into()))?;
        // A blank row shadowed by a real value carries no information.
        let data = &self.data;
        self.blanks
            .retain(|(c, y, k)| !data.get(&(c.clone(), k.clone())).is_some_and(|m| m.contains_key(y)));
        Ok(Panel {
            registry: self.registry,
            countries: self.names.keys().cloned().collect(),
            names: self.names,
            first_year,
            last_year,
            data: self.data,
            blanks: self.blanks,
        })
    }
}

impl Panel {
    pub fn registry(&self) -> &IndicatorRegistry {
        &self.registry
    }

    /// Countries in ascending ISO3 order.
    pub fn countries(&self) -> &[String] {
        &self.countries
    }

    pub fn country_name(&self, country: &str) -> Option<&str> {
        self.names.get(country).map(String::as_str)
    }

    pub fn first_year(&self) -> i32 {
        self.first_year
    }

    pub fn last_year(&self) -> i32 {
        self.last_year
    }

    pub fn years(&self) -> Vec<i32> {
        (self.first_year..=self.last_year).collect()
    }

    pub fn has_country(&self, country: &str) -> bool {
        self.names.contains_key(country)
    }

    pub fn len(&self) -> usize {
        self.data.values().map(BTreeMap::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn value(&self, country: &str, year: i32, indicator: &str) -> Option<f64> {
        self.data
            .get(&(country.to_string(), IndicatorKey(indicator.to_string())))
            .and_then(|m| m.get(&year).copied())
    }

    pub fn observations(&self) -> impl Iterator<Item = Observation> + '_ {
        self.data.iter().flat_map(|((country, key), years)| {
            years.iter().map(move |(&year, &value)| Observation {
                country: country.clone(),
                year,
                indicator: key.clone(),
                value,
            })
        })
    }

    /// Full-range series for one country and indicator code.
    pub fn series(&self, country: &str, code: &str) -> Result<TimeSeries> {
        let key = self.registry.key(code)?;
        get_series(self, country, &key)
    }

    /// Drops every observation after `cutoff`.
    pub fn truncate_after(&self, cutoff: i32) -> Result<Panel> {
        if cutoff < self.first_year {
            return Err(Error::Domain(format!(
                "cutoff {cutoff} precedes the panel's first year {}",
                self.first_year
            )));
        }
        let mut out = self.clone();
        out.last_year = self.last_year.min(cutoff);
        for years in out.data.values_mut() {
            years.retain(|&y, _| y <= cutoff);
        }
        out.data.retain(|_, years| !years.is_empty());
        out.blanks.retain(|(_, y, _)| *y <= cutoff);
        Ok(out)
    }

    fn slot_mut(&mut self, country: &str, code: &str) -> &mut BTreeMap<i32, f64> {
        let key = IndicatorKey(code.to_string());
        self.data.entry((country.to_string(), key)).or_default()
    }
}

/// Full-year-range series, missing where no observation exists.
pub fn get_series(panel: &Panel, country: &str, indicator: &IndicatorKey) -> Result<TimeSeries> {
    if !panel.has_country(country) {
        return Err(Error::Lookup(format!("unknown country '{country}'")));
    }
    if !panel.registry.contains(indicator.as_str()) {
        return Err(Error::Lookup(format!("unregistered indicator '{indicator}'")));
    }
    let mut out = TimeSeries::empty_range(panel.first_year, panel.last_year);
    if let Some(years) = panel.data.get(&(country.to_string(), indicator.clone())) {
        for (&year, &value) in years {
            if let Some(i) = out.index_of(year) {
                out.set(i, Some(value));
            }
        }
    }
    Ok(out)
}

/// Adds broad-money growth (from levels) and log GDP per capita.
///
/// Provided observations are never overwritten, so a published growth
/// series wins over one derived from levels. Non-positive inputs leave
/// the derived value missing and produce a warning.
pub fn derive_indicators(panel: &Panel) -> (Panel, Vec<DerivationWarning>) {
    let mut out = panel.clone();
    out.registry.register(BROAD_MONEY_GROWTH);
    out.registry.register(LOG_GDP_PER_CAPITA);
    let mut warnings = Vec::new();

    for country in panel.countries() {
        let levels = panel.data.get(&(country.clone(), IndicatorKey(BROAD_MONEY_LEVEL.into())));
        if let Some(levels) = levels {
            let mut derived = Vec::new();
            for (&year, &level) in levels {
                if panel.value(country, year, BROAD_MONEY_GROWTH).is_some() {
                    continue;
                }
                let Some(&prev) = levels.get(&(year - 1)) else { continue };
                if prev <= 0.0 {
                    warnings.push(DerivationWarning {
                        country: country.clone(),
                        year,
                        indicator: BROAD_MONEY_GROWTH,
                        message: format!("non-positive broad money level {prev} in {}", year - 1),
                    });
                    continue;
                }
                derived.push((year, 100.0 * (level / prev - 1.0)));
            }
            out.slot_mut(country, BROAD_MONEY_GROWTH).extend(derived);
        }

        let gdppc = panel.data.get(&(country.clone(), IndicatorKey(GDP_PER_CAPITA.into())));
        if let Some(gdppc) = gdppc {
            let mut derived = Vec::new();
            for (&year, &v) in gdppc {
                if panel.value(country, year, LOG_GDP_PER_CAPITA).is_some() {
                    continue;
                }
                if v <= 0.0 {
                    warnings.push(DerivationWarning {
                        country: country.clone(),
                        year,
                        indicator: LOG_GDP_PER_CAPITA,
                        message: format!("non-positive GDP per capita {v}"),
                    });
                    continue;
                }
                derived.push((year, v.ln()));
            }
            out.slot_mut(country, LOG_GDP_PER_CAPITA).extend(derived);
        }
    }
    out.data.retain(|_, years| !years.is_empty());
    for w in &warnings {
        log::warn!("{} {} {}: {}", w.country, w.year, w.indicator, w.message);
    }
    (out, warnings)
}

/// Latest observation at or before `cutoff` for every (country, indicator)
/// pair. Pairs with nothing on or before the cutoff are absent.
pub fn carry_forward_latest(panel: &Panel, cutoff: i32) -> BTreeMap<(String, IndicatorKey), Vintage> {
    panel
        .data
        .iter()
        .filter_map(|(key, years)| {
            years
                .range(..=cutoff)
                .next_back()
                .map(|(&source_year, &value)| (key.clone(), Vintage { value, source_year }))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<Panel> {
        parse_panel_csv(text.as_bytes(), &IndicatorRegistry::default())
    }

    const HEAD: &str = "country_iso3,country_name,year,indicator,value\n";

    #[test]
    fn parses_three_rows() {
        let text = format!(
            "{HEAD}GEO,Georgia,2024,FP.CPI.TOTL.ZG,1.11\nGEO,Georgia,2024,NY.GDP.MKTP.KD.ZG,9.68\nGEO,Georgia,2024,SL.UEM.TOTL.ZS,11.48\n"
        );
        let panel = parse(&text).unwrap();
        assert_eq!(panel.len(), 3);
        assert_eq!(panel.countries(), &["GEO".to_string()]);
        assert_eq!(panel.value("GEO", 2024, INFLATION), Some(1.11));
    }

    #[test]
    fn non_numeric_value_names_line() {
        let text = format!("{HEAD}GEO,Georgia,2023,FP.CPI.TOTL.ZG,2.0\nGEO,Georgia,2024,FP.CPI.TOTL.ZG,abc\n");
        match parse(&text) {
            Err(Error::Parse { line, message }) => {
                assert_eq!(line, 3);
                assert!(message.contains("abc"));
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn wrong_column_count_is_a_parse_error() {
        let text = format!("{HEAD}GEO,Georgia,2024,FP.CPI.TOTL.ZG\n");
        assert!(matches!(parse(&text), Err(Error::Parse { line: 2, .. })));
        let text = format!("{HEAD}GEO,Georgia,20x4,FP.CPI.TOTL.ZG,1\n");
        assert!(matches!(parse(&text), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn conflicting_duplicate_is_rejected() {
        let text = format!("{HEAD}GEO,Georgia,2024,FP.CPI.TOTL.ZG,1.11\nGEO,Georgia,2024,FP.CPI.TOTL.ZG,1.12\n");
        assert!(matches!(parse(&text), Err(Error::Conflict { .. })));
        let same = format!("{HEAD}GEO,Georgia,2024,FP.CPI.TOTL.ZG,1.11\nGEO,Georgia,2024,FP.CPI.TOTL.ZG,1.11\n");
        assert_eq!(parse(&same).unwrap().len(), 1);
    }

    #[test]
    fn unregistered_indicator_is_rejected() {
        let text = format!("{HEAD}GEO,Georgia,2024,XX.FAKE,1\n");
        assert!(matches!(parse(&text), Err(Error::Parse { .. })));
    }

    #[test]
    fn blank_value_is_missing_not_zero() {
        let text = format!("{HEAD}GEO,Georgia,2020,SI.POV.GINI,\nGEO,Georgia,2021,SI.POV.GINI,34.2\n");
        let panel = parse(&text).unwrap();
        assert_eq!(panel.first_year(), 2020);
        let s = panel.series("GEO", GINI).unwrap();
        assert_eq!(s.values(), &[None, Some(34.2)]);
    }

    #[test]
    fn derives_growth_and_log() {
        let text = format!(
            "{HEAD}GEO,Georgia,2020,BROAD_MONEY_LEVEL,100\nGEO,Georgia,2021,BROAD_MONEY_LEVEL,110\nGEO,Georgia,2021,NY.GDP.PCAP.CD,{}\nGEO,Georgia,2020,NY.GDP.PCAP.CD,-5\n",
            std::f64::consts::E * std::f64::consts::E
        );
        let (panel, warnings) = derive_indicators(&parse(&text).unwrap());
        let g = panel.value("GEO", 2021, BROAD_MONEY_GROWTH).unwrap();
        assert!((g - 10.0).abs() < 1e-12);
        assert_eq!(panel.value("GEO", 2020, BROAD_MONEY_GROWTH), None);
        assert!((panel.value("GEO", 2021, LOG_GDP_PER_CAPITA).unwrap() - 2.0).abs() < 1e-15);
        assert_eq!(panel.value("GEO", 2020, LOG_GDP_PER_CAPITA), None);
        assert_eq!(warnings.len(), 1);
        assert_eq!(warnings[0].year, 2020);
    }

    #[test]
    fn provided_growth_wins_over_levels() {
        let text = format!(
            "{HEAD}GEO,Georgia,2020,BROAD_MONEY_LEVEL,100\nGEO,Georgia,2021,BROAD_MONEY_LEVEL,110\nGEO,Georgia,2021,BROAD_MONEY_GROWTH,9.5\n"
        );
        let (panel, _) = derive_indicators(&parse(&text).unwrap());
        assert_eq!(panel.value("GEO", 2021, BROAD_MONEY_GROWTH), Some(9.5));
    }

    #[test]
    fn carry_forward_picks_latest_at_or_before_cutoff() {
        let text = format!(
            "{HEAD}GEO,Georgia,2019,SI.POV.GINI,36.0\nGEO,Georgia,2021,SI.POV.GINI,34.5\nGEO,Georgia,2024,FP.CPI.TOTL.ZG,1.11\nGEO,Georgia,2025,FP.CPI.TOTL.ZG,3.0\nUSA,United States,2025,SI.POV.GINI,41.0\n"
        );
        let panel = parse(&text).unwrap();
        let snap = carry_forward_latest(&panel, 2024);
        let key = |c: &str, k: &str| (c.to_string(), IndicatorKey(k.to_string()));
        assert_eq!(snap[&key("GEO", GINI)], Vintage { value: 34.5, source_year: 2021 });
        assert_eq!(snap[&key("GEO", INFLATION)], Vintage { value: 1.11, source_year: 2024 });
        assert!(!snap.contains_key(&key("USA", GINI)));
    }

    #[test]
    fn series_lookup() {
        let mut text = String::from(HEAD);
        for y in 2005..=2024 {
            text.push_str(&format!("GEO,Georgia,{y},FP.CPI.TOTL.ZG,{}\n", y - 2000));
        }
        text.push_str("GEO,Georgia,2010,SI.POV.GINI,40\n");
        let panel = parse(&text).unwrap();
        assert_eq!(panel.series("GEO", INFLATION).unwrap().len(), 20);
        let gini = panel.series("GEO", GINI).unwrap();
        assert_eq!(gini.count_present(), 1);
        assert_eq!(gini.get(2011), None);
        assert!(matches!(panel.series("GEO", "NOPE"), Err(Error::Lookup(_))));
        assert!(matches!(panel.series("ARM", INFLATION), Err(Error::Lookup(_))));
    }

    #[test]
    fn truncate_drops_later_years() {
        let text = format!("{HEAD}GEO,Georgia,2024,FP.CPI.TOTL.ZG,1\nGEO,Georgia,2025,FP.CPI.TOTL.ZG,2\n");
        let panel = parse(&text).unwrap().truncate_after(2024).unwrap();
        assert_eq!(panel.last_year(), 2024);
        assert_eq!(panel.len(), 1);
        assert!(parse(&text).unwrap().truncate_after(2000).is_err());
    }
}
