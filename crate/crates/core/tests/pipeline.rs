use std::path::PathBuf;

use gi_core::config::RunConfig;
use gi_core::pipeline::{load_panel, run_pipeline, RunOutput};
use gi_core::report::Field;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn run_with(config: &RunConfig) -> RunOutput {
    let panel = load_panel(&fixture("panel.csv")).unwrap();
    run_pipeline(&panel, config).unwrap()
}

fn run() -> RunOutput {
    run_with(&RunConfig::load(&fixture("run.toml")).unwrap())
}

#[test]
fn rows_sorted_by_country_then_year() {
    let out = run();
    let t = out.pillars_table();
    let keys: Vec<(String, i64)> = t
        .rows
        .iter()
        .map(|r| match (&r[0], &r[1]) {
            (Field::Text(c), Field::Int(y)) => (c.clone(), *y),
            _ => panic!("unexpected key cells"),
        })
        .collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    assert_eq!(keys.len(), 9 * 20);
}

#[test]
fn missing_gini_country_renormalizes() {
    let out = run();
    let aze = out.country("AZE").unwrap();
    assert!(aze.years.iter().all(|r| r.irs.irs.is_err()));
    let with_gi: Vec<_> = aze.years.iter().filter(|r| r.gi.is_ok()).collect();
    assert!(!with_gi.is_empty());
    for r in with_gi {
        assert!(!r.present.contains("IRS"));
        let present: Vec<f64> = [r.lnsr.lnsr, r.ifc.ifc].iter().filter_map(|c| c.ok()).collect();
        let gi = r.gi.unwrap();
        let lo = present.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = present.iter().copied().fold(0.0, f64::max);
        assert!(gi >= lo - 1e-9 && gi <= hi + 1e-9);
    }
}

#[test]
fn every_blank_component_has_a_reason() {
    let out = run();
    let t = out.components_table();
    let col = |n: &str| t.column(n).unwrap();
    for row in &t.rows {
        for (value, reason) in [(col("raw"), col("raw_reason")), (col("score"), col("score_reason"))] {
            match (&row[value], &row[reason]) {
                (Field::Blank, Field::Text(r)) => assert!(!r.is_empty()),
                (Field::Num(x), Field::Blank) => assert!(x.is_finite()),
                (Field::Blank, Field::Blank) => panic!("blank without reason: {row:?}"),
                (Field::Num(_), Field::Text(r)) => assert_eq!(r, "unscored", "{row:?}"),
                other => panic!("unexpected cells {other:?}"),
            }
        }
    }
}

#[test]
fn scores_and_pillars_in_range() {
    let out = run();
    for c in &out.countries {
        for r in &c.years {
            let scores = r.irs.scores.iter().chain(&r.lnsr.scores).chain(&r.ifc.scores);
            for s in scores.filter_map(|s| s.score.ok()) {
                assert!((0.0..=100.0).contains(&s));
            }
            for p in r.pillars().iter().filter_map(|p| p.ok()) {
                assert!((0.0..=100.0).contains(&p));
            }
        }
    }
}

#[test]
fn decomposition_residuals_vanish() {
    let out = run();
    let mut defined = 0;
    for c in &out.countries {
        for r in &c.years {
            if let Some(res) = r.residual() {
                assert!(res.abs() <= 1e-12, "{} {} residual {res}", c.country, r.year);
                defined += 1;
            }
            if r.pillars().iter().any(|p| p.is_err()) {
                assert!(r.contributions.is_err());
            }
        }
    }
    assert!(defined > 50);
}

#[test]
fn single_member_region_equals_member() {
    let out = run();
    let config = RunConfig::load(&fixture("run.toml")).unwrap();
    let t = out.region_table(&config.regions);
    let eas = t.rows.iter().find(|r| r[0] == Field::text("EAS")).unwrap();
    let chn = out.country("CHN").unwrap();
    let latest = chn.latest(out.cutoff, |r| r.gi).unwrap().0;
    assert_eq!(eas[t.column("gi").unwrap()], Field::Num(latest));
    let empty = t.rows.iter().find(|r| r[0] == Field::text("SSF")).unwrap();
    assert!(empty[2..].iter().all(|f| matches!(f, Field::Blank | Field::Int(0))));
}

#[test]
fn cutoff_limits_every_table() {
    let mut config = RunConfig::default();
    config.cutoff = 2020;
    let out = run_with(&config);
    assert!(out.countries.iter().all(|c| c.years.last().unwrap().year == 2020));
    let snap = out.snapshot_table();
    let year_col = snap.column("source_year").unwrap();
    assert!(snap.rows.iter().all(|r| matches!(r[year_col], Field::Int(y) if y <= 2020)));
    let rus_gini = snap
        .rows
        .iter()
        .find(|r| r[0] == Field::text("RUS") && r[1] == Field::text("SI.POV.GINI"))
        .unwrap();
    assert_eq!(rus_gini[year_col], Field::Int(2019));
}

#[test]
fn direct_r_squared_mode_scores_100x() {
    let mut config = RunConfig::default();
    config.bounds.r_squared_mode = gi_core::scaling::ScoreMode::Direct;
    let out = run_with(&config);
    let usa = out.country("USA").unwrap();
    let r = &usa.years[10];
    let raw = r.irs.inputs.r_squared.unwrap();
    assert!((r.irs.scores[0].score.unwrap() - 100.0 * raw).abs() < 1e-12);
}

#[test]
fn weights_change_gi_but_not_pillars() {
    let base = run();
    let mut config = RunConfig::load(&fixture("run.toml")).unwrap();
    config.weights.gi.ifc = 0.6;
    let moved = run_with(&config);
    let (a, b) = (&base.country("GEO").unwrap().years[15], &moved.country("GEO").unwrap().years[15]);
    assert_eq!(a.pillars(), b.pillars());
    assert_ne!(a.gi, b.gi);
}

#[test]
fn tables_are_finite_and_complete() {
    let out = run();
    let config = RunConfig::load(&fixture("run.toml")).unwrap();
    let tables = out.compute_tables(&config);
    let names: Vec<&str> = tables.iter().map(|t| t.name.as_str()).collect();
    for n in ["pillars", "gi", "components", "snapshot", "fig1_gi_pillars", "fig9_forecasts"] {
        assert!(names.contains(&n), "missing {n}");
    }
    for t in &tables {
        t.validate().unwrap();
        let csv = t.to_csv(false).unwrap();
        let bad = csv.lines().flat_map(|l| l.split(',')).any(|c| ["NaN", "inf", "-inf"].contains(&c));
        assert!(!bad, "{}", t.name);
    }
    let fig1 = tables.iter().find(|t| t.name == "fig1_gi_pillars").unwrap();
    assert_eq!(fig1.len(), 20);
}

#[test]
fn unknown_mu_source_is_a_config_error() {
    let mut config = RunConfig::default();
    config.lnsr.mu_source = "NOT.AN.INDICATOR".into();
    let panel = load_panel(&fixture("panel.csv")).unwrap();
    assert!(matches!(run_pipeline(&panel, &config), Err(gi_core::Error::Config(_))));
}
