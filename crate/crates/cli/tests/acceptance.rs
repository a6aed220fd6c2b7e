//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero when any criterion fails.

mod common;

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use gi_core::composite::{aggregate_gi, decompose_dlog, GiWeights};
use gi_core::config::RunConfig;
use gi_core::ifc::{
    ar1_forecast, build_zeta_signal, calibrate_alpha, delta_rmse, fpas_arx_forecast, fpas_zeta_forecast, rolling_rmse,
    truncate_gain, validation_segment, IfcConfig, ZetaConfig,
};
use gi_core::numerics::{ols_fit, rolling_stat, student_t_sf, zeta_critical_line, RollingKind};
use gi_core::panel::{GDP_GROWTH, INFLATION, UNEMPLOYMENT};
use gi_core::pipeline::{load_panel, run_pipeline};
use gi_core::scenario::{
    binding_pillar, build_scenario_paths, classify_band, Endpoints, GiMode, Horizon, ScenarioSettings, ScenarioSpec,
};
use gi_core::TimeSeries;

use common::{dir_contents, fixture, gi, read_csv};

struct Outcome {
    pass: bool,
    detail: String,
}

fn check(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

struct RefRow {
    country: String,
    scenario: String,
    year: i32,
    gi: f64,
    band: String,
    pillars: Option<[f64; 3]>,
    binding: Option<(String, f64)>,
}

fn reference_rows(name: &str) -> Vec<RefRow> {
    let rows = read_csv(&fixture(name));
    let head = &rows[0];
    let col = |n: &str| head.iter().position(|h| h == n);
    let num = |s: &str| s.parse::<f64>().unwrap();
    rows[1..]
        .iter()
        .map(|r| RefRow {
            country: r[col("country").unwrap()].clone(),
            scenario: r[col("scenario").unwrap()].clone(),
            year: r[col("year").unwrap()].parse().unwrap(),
            gi: num(&r[col("gi").unwrap()]),
            band: r[col("band").unwrap()].clone(),
            pillars: col("irs").map(|i| [num(&r[i]), num(&r[i + 1]), num(&r[i + 2])]),
            binding: col("binding_pillar").map(|i| (r[i].clone(), num(&r[i + 1]))),
        })
        .collect()
}

/// GI endpoints from the reference GI table, pillar endpoints from the
/// reference pillar table, both from their Baseline rows.
fn reference_endpoints() -> Vec<Endpoints> {
    let gi_rows = reference_rows("reference_scenario_gi.csv");
    let pillar_rows = reference_rows("reference_scenario_pillars.csv");
    let mut order: Vec<String> = Vec::new();
    for r in &gi_rows {
        if !order.contains(&r.country) {
            order.push(r.country.clone());
        }
    }
    let find = |rows: &[RefRow], c: &str, y: i32| {
        rows.iter().find(|r| r.country == c && r.scenario == "Baseline" && r.year == y).map(|r| (r.gi, r.pillars))
    };
    order
        .iter()
        .map(|c| {
            let (g0, _) = find(&gi_rows, c, 2026).unwrap();
            let (g1, _) = find(&gi_rows, c, 2030).unwrap();
            let p0 = find(&pillar_rows, c, 2026).unwrap().1.unwrap();
            let p1 = find(&pillar_rows, c, 2030).unwrap().1.unwrap();
            Endpoints {
                country: c.clone(),
                gi: Some((g0, g1)),
                irs: Some((p0[0], p1[0])),
                lnsr: Some((p0[1], p1[1])),
                ifc: Some((p0[2], p1[2])),
            }
        })
        .collect()
}

fn replication_paths(specs: &[ScenarioSpec]) -> gi_core::scenario::ScenarioPaths {
    let settings = ScenarioSettings {
        horizon: Horizon::default(),
        specs,
        mode: GiMode::TableReplication,
        weights: GiWeights::default(),
        epsilon_floor: 0.0,
    };
    build_scenario_paths(&reference_endpoints(), &settings).unwrap()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let paths = replication_paths(&[ScenarioSpec::baseline(&Horizon::default())]);
    let elapsed = start.elapsed();
    let reference = reference_rows("reference_scenario_gi.csv");
    let mut worst = 0.0_f64;
    let mut worst_usa = 0.0_f64;
    let mut compared = 0;
    for r in reference.iter().filter(|r| r.scenario == "Baseline") {
        let row = paths.rows.iter().find(|p| p.country == r.country && p.year == r.year).unwrap();
        let d = (row.gi - r.gi).abs();
        compared += 1;
        if r.country == "USA" {
            worst_usa = worst_usa.max(d);
        } else {
            worst = worst.max(d);
        }
    }
    let usa_2028 = paths.rows.iter().find(|p| p.country == "USA" && p.year == 2028).unwrap().gi;
    check(
        compared == 45 && worst <= 0.05 + 1e-9 && worst_usa <= 0.01 + 1e-9 && elapsed < Duration::from_secs(1),
        format!(
            "{compared} baseline rows, max |dev| {worst:.4} (tol 0.05), USA {worst_usa:.4} (tol 0.01), USA 2028 {usa_2028:.3}, {elapsed:?}"
        ),
    )
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let rows = reference_rows("reference_scenario_pillars.csv");
    let mut mismatches = Vec::new();
    for r in &rows {
        let [a, b, c] = r.pillars.unwrap();
        let (pillar, score) = binding_pillar(a, b, c);
        let (want_name, want_score) = r.binding.clone().unwrap();
        if pillar.name() != want_name || score != want_score || score != a.min(b).min(c) {
            mismatches.push(format!("{} {} {}", r.country, r.scenario, r.year));
        }
    }
    let elapsed = start.elapsed();
    let geo = binding_pillar(69.02, 74.40, 16.08);
    let arm = binding_pillar(8.50, 83.64, 14.33);
    check(
        rows.len() == 135 && mismatches.is_empty() && elapsed < Duration::from_secs(1),
        format!(
            "{} rows, {} mismatches {:?}, GEO 2026 {} {}, ARM 2026 {} {}, {elapsed:?}",
            rows.len(),
            mismatches.len(),
            mismatches,
            geo.0.name(),
            geo.1,
            arm.0.name(),
            arm.1
        ),
    )
}

fn criterion_3() -> Outcome {
    let reference = reference_rows("reference_scenario_gi.csv");
    let base: BTreeMap<(String, i32), f64> =
        reference.iter().filter(|r| r.scenario == "Baseline").map(|r| ((r.country.clone(), r.year), r.gi)).collect();
    let adverse = ScenarioSpec::adverse();
    let optimistic = ScenarioSpec::optimistic();
    let mut schedule_dev = 0.0_f64;
    for r in reference.iter().filter(|r| r.scenario != "Baseline") {
        let k = (r.year - 2026) as usize;
        let want = if r.scenario == "Adverse" { adverse.gi_shocks[k] } else { optimistic.gi_shocks[k] };
        schedule_dev = schedule_dev.max((r.gi - base[&(r.country.clone(), r.year)] - want).abs());
    }
    let recovered = schedule_dev <= 0.02 + 1e-9;

    let paths = replication_paths(&ScenarioSpec::defaults());
    let mut regen_dev = 0.0_f64;
    let mut worst = String::new();
    let mut band_mismatch = 0;
    for r in &reference {
        let row = paths
            .rows
            .iter()
            .find(|p| p.country == r.country && p.scenario == r.scenario && p.year == r.year)
            .unwrap();
        let d = (row.gi - r.gi).abs();
        if d > regen_dev {
            regen_dev = d;
            worst = format!("{} {} {}", r.country, r.scenario, r.year);
        }
        if row.band.label() != r.band {
            band_mismatch += 1;
        }
    }
    let regenerated = regen_dev <= 0.02 + 1e-9;
    check(
        recovered && regenerated,
        format!(
            "shock schedules recovered to {schedule_dev:.4} (tol 0.02): {}; regeneration max |dev| {regen_dev:.4} at {worst} (tol 0.02): {}; {band_mismatch} band label differences",
            if recovered { "ok" } else { "out of tolerance" },
            if regenerated { "ok" } else { "out of tolerance" },
        ),
    )
}

fn criterion_4() -> Outcome {
    let hi = classify_band(50.03).unwrap().label();
    let lo = classify_band(49.93).unwrap().label();
    let mut monotone = true;
    let mut prev = classify_band(0.0).unwrap();
    for i in 1..=10_000 {
        let b = classify_band(f64::from(i) / 100.0).unwrap();
        monotone &= b >= prev;
        prev = b;
    }
    check(
        hi == "50–75" && lo == "25–50" && monotone,
        format!("50.03 -> {hi}, 49.93 -> {lo}, sweep 0..100 step 0.01 monotone: {monotone}"),
    )
}

fn criterion_5() -> Outcome {
    let d = delta_rmse(4.345, 4.090).unwrap();
    let truncation = [-50.0, -5.868, -1e-9, -0.0].iter().all(|&x| truncate_gain(x) == 0.0)
        && truncate_gain(5.868) == 5.868;
    check(
        (d - 5.868).abs() <= 0.01 && truncation,
        format!("(4.345, 4.090) -> {d:.4}% (want 5.868 +- 0.01), negative deltas truncate to 0: {truncation}"),
    )
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let w = GiWeights::default();
    let mut worst = 0.0_f64;
    let mut checked = 0;
    for _ in 0..1000 {
        let len = rng.gen_range(2..12);
        let traj: Vec<[f64; 3]> =
            (0..len).map(|_| [rng.gen_range(0.5..100.0), rng.gen_range(0.5..100.0), rng.gen_range(0.5..100.0)]).collect();
        for t in 1..len {
            let prev = traj[t - 1];
            let curr = traj[t];
            let g0 = aggregate_gi(prev.map(Some), &w, 0.0).unwrap();
            let g1 = aggregate_gi(curr.map(Some), &w, 0.0).unwrap();
            let c = decompose_dlog(prev.map(Ok), curr.map(Ok), &w).unwrap();
            worst = worst.max((c.iter().sum::<f64>() - (g1.ln() - g0.ln())).abs());
            checked += 1;
        }
    }
    check(worst <= 1e-12, format!("1000 trajectories, {checked} year pairs, max |sum c - dlog GI| {worst:.2e} (tol 1e-12)"))
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let w = GiWeights::default();
    let wa = w.as_array();
    let (mut in_range, mut equal_dev, mut renorm_dev) = (true, 0.0_f64, 0.0_f64);
    for _ in 0..1000 {
        let p: [f64; 3] = [rng.gen_range(0.01..100.0), rng.gen_range(0.01..100.0), rng.gen_range(0.01..100.0)];
        let g = aggregate_gi(p.map(Some), &w, 0.0).unwrap();
        let (lo, hi) = (p.iter().copied().fold(f64::INFINITY, f64::min), p.iter().copied().fold(0.0, f64::max));
        in_range &= g >= lo * (1.0 - 1e-15) && g <= hi * (1.0 + 1e-15);

        let x = p[0];
        equal_dev = equal_dev.max((aggregate_gi([Some(x); 3], &w, 0.0).unwrap() - x).abs());

        let drop = rng.gen_range(0..3);
        let mut partial = p.map(Some);
        partial[drop] = None;
        let got = aggregate_gi(partial, &w, 0.0).unwrap();
        let kept: Vec<usize> = (0..3).filter(|&i| i != drop).collect();
        let (i, j) = (kept[0], kept[1]);
        let direct = ((wa[i] * p[i].ln() + wa[j] * p[j].ln()) / (wa[i] + wa[j])).exp();
        renorm_dev = renorm_dev.max((got - direct).abs());
    }
    check(
        in_range && equal_dev <= 1e-12 && renorm_dev <= 1e-12,
        format!(
            "1000 triples: GI within [min, max] {in_range}, equal-pillar dev {equal_dev:.2e}, two-pillar renormalization dev {renorm_dev:.2e} (tol 1e-12)"
        ),
    )
}

/// Least squares through the normal equations with partial pivoting.
fn normal_equations(x: &[Vec<f64>], y: &[f64]) -> Vec<f64> {
    let p = x[0].len();
    let mut a = vec![vec![0.0; p + 1]; p];
    for (row, &yi) in x.iter().zip(y) {
        for i in 0..p {
            for j in 0..p {
                a[i][j] += row[i] * row[j];
            }
            a[i][p] += row[i] * yi;
        }
    }
    for col in 0..p {
        let pivot = (col..p).max_by(|&r, &s| a[r][col].abs().total_cmp(&a[s][col].abs())).unwrap();
        a.swap(col, pivot);
        for r in col + 1..p {
            let f = a[r][col] / a[col][col];
            for c in col..=p {
                a[r][c] -= f * a[col][c];
            }
        }
    }
    let mut beta = vec![0.0; p];
    for i in (0..p).rev() {
        let s: f64 = (i + 1..p).map(|j| a[i][j] * beta[j]).sum();
        beta[i] = (a[i][p] - s) / a[i][i];
    }
    beta
}

/// Alternating-series acceleration for eta(s), then zeta = eta / (1 - 2^(1-s)).
fn zeta_half_oracle() -> f64 {
    let s = 0.5_f64;
    let n = 40;
    let mut d = (3.0 + 8.0_f64.sqrt()).powi(n);
    d = (d + 1.0 / d) / 2.0;
    let (mut b, mut c, mut sum) = (-1.0_f64, -d, 0.0_f64);
    for k in 0..n {
        c = b - c;
        sum += c * (f64::from(k) + 1.0).powf(-s);
        let (kf, nf) = (f64::from(k), f64::from(n));
        b = (kf + nf) * (kf - nf) * b / ((kf + 0.5) * (kf + 1.0));
    }
    let eta = sum / d;
    eta / (1.0 - 2.0_f64.powf(1.0 - s))
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut ols_dev = 0.0_f64;
    for _ in 0..100 {
        let n = rng.gen_range(10..40);
        let p = rng.gen_range(2..6);
        let x: Vec<Vec<f64>> = (0..n)
            .map(|_| std::iter::once(1.0).chain((1..p).map(|_| rng.gen_range(-5.0..5.0))).collect())
            .collect();
        let beta: Vec<f64> = (0..p).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let y: Vec<f64> =
            x.iter().map(|r| r.iter().zip(&beta).map(|(a, b)| a * b).sum::<f64>() + rng.gen_range(-1.0..1.0)).collect();
        let fit = ols_fit(&x, &y).unwrap();
        for (a, b) in fit.coefficients.iter().zip(normal_equations(&x, &y)) {
            ols_dev = ols_dev.max((a - b).abs() / b.abs().max(1.0));
        }
    }

    let mut roll_dev = 0.0_f64;
    let mut pattern_ok = true;
    for _ in 0..50 {
        let len = rng.gen_range(5..30);
        let values: Vec<Option<f64>> =
            (0..len).map(|_| (!rng.gen_bool(0.1)).then(|| rng.gen_range(-10.0..10.0))).collect();
        let series = TimeSeries::from_values(2000, values.clone());
        let w = rng.gen_range(2..6);
        for kind in [RollingKind::Variance, RollingKind::Rms, RollingKind::Mean] {
            let out = rolling_stat(&series, w, kind).unwrap();
            for i in 0..len {
                let slice: Option<Vec<f64>> = (i + 1 >= w).then(|| values[i + 1 - w..=i].iter().copied().collect()).flatten();
                match (out.values()[i], slice) {
                    (Some(got), Some(xs)) => {
                        let m = xs.iter().sum::<f64>() / w as f64;
                        let want = match kind {
                            RollingKind::Variance => xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (w - 1) as f64,
                            RollingKind::Rms => (xs.iter().map(|x| x * x).sum::<f64>() / w as f64).sqrt(),
                            RollingKind::Mean => m,
                        };
                        roll_dev = roll_dev.max((got - want).abs());
                    }
                    (None, None) => {}
                    _ => pattern_ok = false,
                }
            }
        }
    }

    let first_zero = zeta_critical_line(14.134725).unwrap().norm();
    let engine_half = zeta_critical_line(0.0).unwrap().re;
    let oracle_half = zeta_half_oracle();
    let t = student_t_sf(1.0, 1);
    let pass = ols_dev <= 1e-9
        && roll_dev <= 1e-12
        && pattern_ok
        && first_zero < 1e-3
        && (engine_half - oracle_half).abs() <= 1e-4
        && (engine_half + 1.46035).abs() <= 1e-4
        && (t - 0.25).abs() <= 1e-12;
    check(
        pass,
        format!(
            "OLS rel dev {ols_dev:.2e}; rolling dev {roll_dev:.2e}, gaps consistent {pattern_ok}; |zeta(1/2+14.134725i)| {first_zero:.2e}; zeta(1/2) {engine_half:.6} vs oracle {oracle_half:.6}; t_sf(1,1) {t}"
        ),
    )
}

fn criterion_9() -> Outcome {
    let config = IfcConfig::default();
    let grid = config.alpha_grid().unwrap();
    let years: Vec<i32> = (2000..2020).collect();
    let signal = build_zeta_signal(&years, &ZetaConfig::default()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let fpas = TimeSeries::new(
        years.clone(),
        years.iter().enumerate().map(|(i, _)| (i >= 6).then(|| rng.gen_range(1.0..9.0))).collect(),
    )
    .unwrap();

    let no_signal = fpas.clone();
    let validation = validation_segment(&fpas, &no_signal, config.validation_fraction);
    let alpha0 = calibrate_alpha(&fpas, &signal, &no_signal, validation, &grid).alpha;

    let planted = fpas_zeta_forecast(&fpas, &signal, 2.0);
    let validation = validation_segment(&fpas, &planted, config.validation_fraction);
    let alpha2 = calibrate_alpha(&fpas, &signal, &planted, validation, &grid).alpha;

    let panel = load_panel(&fixture("panel.csv")).unwrap();
    let run = run_pipeline(&panel, &RunConfig::default()).unwrap();
    let mut audited = 0;
    let mut out_of_sample = true;
    for c in &run.countries {
        let pi = run.panel.series(&c.country, INFLATION).unwrap();
        let g = run.panel.series(&c.country, GDP_GROWTH).unwrap();
        let u = run.panel.series(&c.country, UNEMPLOYMENT).unwrap();
        let ar1 = ar1_forecast(&pi, config.min_train).unwrap();
        let fp = fpas_arx_forecast(&pi, &[&g, &u], config.min_train).unwrap();
        for f in [&ar1, &fp, &c.ifc.forecasts.ar1, &c.ifc.forecasts.fpas] {
            out_of_sample &= f.out_of_sample();
            for (y, last) in f.values.years().iter().zip(&f.train_last) {
                if let Some(l) = last {
                    out_of_sample &= l < y;
                    audited += 1;
                }
            }
        }
    }

    let zero = fpas_zeta_forecast(&fpas, &signal, 0.0);
    let actual = planted;
    let base = rolling_rmse(&actual, &fpas, 5).unwrap();
    let new = rolling_rmse(&actual, &zero, 5).unwrap();
    let mut zero_delta = true;
    let mut compared = 0;
    for (b, n) in base.values().iter().zip(new.values()) {
        if let (Some(b), Some(n)) = (b, n) {
            zero_delta &= delta_rmse(*b, *n) == Ok(0.0);
            compared += 1;
        }
    }
    check(
        alpha0 == 0.0 && alpha2 == 2.0 && out_of_sample && audited > 0 && zero_delta && compared > 0,
        format!(
            "no-signal alpha {alpha0}, planted alpha {alpha2}, {audited} forecasts audited out-of-sample: {out_of_sample}, alpha=0 dRMSE zero over {compared} windows: {zero_delta}"
        ),
    )
}

fn criterion_10() -> Outcome {
    let input = fixture("panel.csv");
    let config = fixture("run.toml");
    let tmp = tempfile::tempdir().unwrap();
    let mut elapsed = Vec::new();
    let mut ok = true;
    for run in ["a", "b"] {
        let out = tmp.path().join(run);
        let start = Instant::now();
        for cmd in ["compute", "decompose", "scenario", "region"] {
            let o = gi(&[
                cmd,
                "--input",
                input.to_str().unwrap(),
                "--config",
                config.to_str().unwrap(),
                "--out",
                out.to_str().unwrap(),
                "--format",
                "both",
            ]);
            ok &= o.status.success();
        }
        elapsed.push(start.elapsed());
    }
    let a = dir_contents(&tmp.path().join("a"));
    let b = dir_contents(&tmp.path().join("b"));
    let identical = !a.is_empty() && a == b;
    let slowest = elapsed.iter().max().copied().unwrap();
    check(
        ok && identical && slowest < Duration::from_secs(10),
        format!("{} files byte-identical across two runs: {identical}; slowest full run {slowest:?}", a.len()),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("scenario interpolation replication", criterion_1),
        ("binding-pillar replication", criterion_2),
        ("shock-schedule recovery and GI row regeneration", criterion_3),
        ("band classification", criterion_4),
        ("relative RMSE change", criterion_5),
        ("decomposition identity", criterion_6),
        ("aggregation properties", criterion_7),
        ("numerics oracle suite", criterion_8),
        ("forecast-harness properties", criterion_9),
        ("end-to-end determinism", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let o = f();
        println!("{} criterion {:>2} ({name}): {}", if o.pass { "PASS" } else { "FAIL" }, i + 1, o.detail);
        failed += usize::from(!o.pass);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
