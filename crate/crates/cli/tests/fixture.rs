mod common;

use common::{fixture, synthetic_panel_csv};

#[test]
fn bundled_panel_matches_generator() {
    let generated = synthetic_panel_csv();
    let path = fixture("panel.csv");
    if std::env::var_os("GI_REGEN_FIXTURES").is_some() {
        std::fs::write(&path, &generated).unwrap();
    }
    let bundled = std::fs::read_to_string(&path).expect("fixtures/panel.csv");
    assert_eq!(bundled, generated, "regenerate with GI_REGEN_FIXTURES=1");
}

#[test]
fn bundled_panel_shape() {
    let rows = common::read_csv(&fixture("panel.csv"));
    let mut countries: Vec<&str> = rows[1..].iter().map(|r| r[0].as_str()).collect();
    countries.dedup();
    assert_eq!(countries.len(), 9);
    let years: std::collections::BTreeSet<&str> = rows[1..].iter().map(|r| r[2].as_str()).collect();
    assert_eq!(years.len(), 20);
    assert!(!rows.iter().any(|r| r[0] == "AZE" && r[3] == "SI.POV.GINI"));
}
