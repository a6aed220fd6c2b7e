#![allow(dead_code)]

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

pub const FIXTURE_SEED: u64 = 20_240_601;
pub const FIRST_YEAR: i32 = 2005;
pub const LAST_YEAR: i32 = 2024;

pub fn workspace_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..").canonicalize().unwrap()
}

pub fn fixture(name: &str) -> PathBuf {
    workspace_root().join("fixtures").join(name)
}

pub fn gi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gi")).args(args).output().expect("run gi")
}

struct Profile {
    iso3: &'static str,
    name: &'static str,
    inflation: f64,
    growth: f64,
    unemployment: f64,
    money_gdp: f64,
    gdppc: f64,
    gini: Option<f64>,
    /// Years with a Gini survey; `None` means every year.
    gini_every: Option<usize>,
    money_as_growth: bool,
}

const PROFILES: [Profile; 9] = [
    Profile { iso3: "ARM", name: "Armenia", inflation: 4.5, growth: 5.0, unemployment: 16.0, money_gdp: 30.0, gdppc: 3500.0, gini: Some(32.0), gini_every: None, money_as_growth: false },
    Profile { iso3: "AZE", name: "Azerbaijan", inflation: 6.0, growth: 4.0, unemployment: 5.5, money_gdp: 25.0, gdppc: 4500.0, gini: None, gini_every: None, money_as_growth: false },
    Profile { iso3: "CHN", name: "China", inflation: 2.5, growth: 8.0, unemployment: 4.5, money_gdp: 190.0, gdppc: 6000.0, gini: Some(40.0), gini_every: None, money_as_growth: false },
    Profile { iso3: "GEO", name: "Georgia", inflation: 5.0, growth: 5.5, unemployment: 15.0, money_gdp: 45.0, gdppc: 3800.0, gini: Some(38.0), gini_every: None, money_as_growth: false },
    Profile { iso3: "ROU", name: "Romania", inflation: 4.0, growth: 3.5, unemployment: 6.5, money_gdp: 38.0, gdppc: 9000.0, gini: Some(35.0), gini_every: None, money_as_growth: false },
    Profile { iso3: "RUS", name: "Russian Federation", inflation: 8.0, growth: 2.5, unemployment: 5.8, money_gdp: 55.0, gdppc: 10000.0, gini: Some(37.0), gini_every: Some(2), money_as_growth: false },
    Profile { iso3: "TUR", name: "Turkiye", inflation: 15.0, growth: 5.0, unemployment: 10.5, money_gdp: 60.0, gdppc: 9500.0, gini: Some(41.0), gini_every: None, money_as_growth: false },
    Profile { iso3: "UKR", name: "Ukraine", inflation: 11.0, growth: 1.5, unemployment: 9.0, money_gdp: 50.0, gdppc: 3000.0, gini: Some(26.0), gini_every: None, money_as_growth: true },
    Profile { iso3: "USA", name: "United States", inflation: 2.4, growth: 2.2, unemployment: 5.5, money_gdp: 85.0, gdppc: 55000.0, gini: Some(41.0), gini_every: None, money_as_growth: false },
];

/// Synthetic 9-country, 20-year long-format panel.
pub fn synthetic_panel_csv() -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(FIXTURE_SEED);
    let z = Normal::new(0.0, 1.0).unwrap();
    let mut out = String::from("country_iso3,country_name,year,indicator,value\n");
    for p in &PROFILES {
        let mut pi = p.inflation;
        let mut u = p.unemployment;
        let mut m = p.money_gdp;
        let mut level = 100.0;
        let mut gdppc = p.gdppc;
        let mut gini = p.gini.unwrap_or(0.0);
        for (k, year) in (FIRST_YEAR..=LAST_YEAR).enumerate() {
            let shock_regime = (2008..=2009).contains(&year) || (2021..=2023).contains(&year);
            let g = p.growth + 1.5 * z.sample(&mut rng) - if shock_regime { 3.0 } else { 0.0 };
            let target = p.inflation + if shock_regime { 0.8 * p.inflation + 3.0 } else { 0.0 };
            pi = 0.55 * pi + 0.45 * target + 0.9 * z.sample(&mut rng) - 0.15 * (g - p.growth);
            u = (0.8 * u + 0.2 * p.unemployment - 0.25 * (g - p.growth) + 0.4 * z.sample(&mut rng)).max(1.0);
            let money_growth = pi + g + 2.0 + 2.0 * z.sample(&mut rng);
            m = (m * (1.0 + (money_growth - pi - g) / 100.0)).max(5.0);
            level *= 1.0 + money_growth / 100.0;
            gdppc *= 1.0 + (g + pi * 0.3) / 100.0;
            gini = gini + 0.05 * (pi - p.inflation) - 0.03 * (g - p.growth) + 0.35 * z.sample(&mut rng);

            let mut row = |code: &str, v: f64| {
                let _ = writeln!(out, "{},{},{year},{code},{v:.3}", p.iso3, quote(p.name));
            };
            row("FP.CPI.TOTL.ZG", pi);
            row("NY.GDP.MKTP.KD.ZG", g);
            if !(p.iso3 == "RUS" && year == 2012) {
                row("SL.UEM.TOTL.ZS", u);
            }
            row("FM.LBL.BMNY.GD.ZS", m);
            row("NY.GDP.PCAP.CD", gdppc);
            if p.money_as_growth {
                row("BROAD_MONEY_GROWTH", money_growth);
            } else {
                row("BROAD_MONEY_LEVEL", level);
            }
            if p.gini.is_some() && p.gini_every.map_or(true, |n| k % n == 0) {
                row("SI.POV.GINI", gini);
            }
        }
    }
    out
}

fn quote(name: &str) -> String {
    if name.contains(',') {
        format!("\"{name}\"")
    } else {
        name.to_string()
    }
}

/// Every file in `dir`, sorted, with its bytes.
pub fn dir_contents(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).unwrap())
        })
        .collect();
    files.sort();
    files
}

pub fn read_csv(path: &Path) -> Vec<Vec<String>> {
    let mut rdr = csv::Reader::from_path(path).unwrap();
    let header: Vec<String> = rdr.headers().unwrap().iter().map(str::to_string).collect();
    let mut rows = vec![header];
    for r in rdr.records() {
        rows.push(r.unwrap().iter().map(str::to_string).collect());
    }
    rows
}
