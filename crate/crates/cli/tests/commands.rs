use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use refuel_cli::study::{self, Pair, SweepPlan};
use refuel_cli::{load_config, parse_config};

fn shipped(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../configs")
        .join(name)
}

fn refuel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_refuel"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_config(dir: &Path, name: &str, targets: &str, extra: &str) -> PathBuf {
    let path = dir.join(name);
    let text = format!(
        r#"{{ {extra}
  "constellation": {{
    "altitude_km": 550,
    "servicer": {{"inclination_deg": 53, "arg_latitude_deg": 0}},
    "targets": [{targets}]
  }}
}}"#
    );
    fs::write(&path, text).unwrap();
    path
}

fn cell(csv: &str, row: usize, col: &str) -> String {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let idx = header.iter().position(|h| *h == col).unwrap();
    lines
        .nth(row)
        .unwrap()
        .split(',')
        .nth(idx)
        .unwrap()
        .to_string()
}

#[test]
fn compare_csv_has_unit_columns_and_one_recommendation() {
    let cfg = shipped("set_c.json");
    let o = refuel(&[
        "compare",
        "--config",
        cfg.to_str().unwrap(),
        "--mass-ratio",
        "2.5",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with(
        "mass_ratio,target_count,architecture,initial_mass_kg,variable_fuel_kg,\
         servicer_fuel_kg,target_fuel_kg,servicer_dv_km_s,target_dv_km_s,recommended\n"
    ));
    assert_eq!(text.lines().count(), 5);
    assert_eq!(text.matches(",true\n").count(), 1);
    let masses: Vec<f64> = (0..4)
        .map(|r| cell(&text, r, "initial_mass_kg").parse().unwrap())
        .collect();
    let best = masses.iter().cloned().fold(f64::INFINITY, f64::min);
    let winner = masses.iter().position(|m| *m == best).unwrap();
    assert_eq!(cell(&text, winner, "recommended"), "true");
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let cfg = shipped("starlink_like.json");
    let c = cfg.to_str().unwrap();
    for args in [
        vec!["compare", "--config", c, "--mass-ratio", "3"],
        vec!["critical-ratio", "--config", c],
        vec!["sweep", "--config", c, "--n-range", "10..12"],
        vec![
            "optimize", "--config", c, "--starts", "8", "--format", "csv",
        ],
    ] {
        let a = refuel(&args);
        let b = refuel(&args);
        assert!(a.status.success(), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn out_flag_writes_the_same_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = shipped("set_b.json");
    let target = dir.path().join("alpha.csv");
    let c = cfg.to_str().unwrap();
    let o = refuel(&[
        "critical-ratio",
        "--config",
        c,
        "--out",
        target.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let direct = refuel(&["critical-ratio", "--config", c]);
    assert_eq!(fs::read(&target).unwrap(), direct.stdout);
    // only the final file is left behind
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let missing = refuel(&["validate", "--config", "/nonexistent/file.json"]);
    assert_eq!(missing.status.code(), Some(2));

    let bad = write_config(
        dir.path(),
        "bad.json",
        r#"{"inclination_deg": 190, "arg_latitude_deg": 0}"#,
        "",
    );
    let o = refuel(&["compare", "--config", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));

    // a shrinking phasing orbit that would need most of a lap dives into the planet
    let low = write_config(
        dir.path(),
        "low.json",
        r#"{"inclination_deg": 53, "arg_latitude_deg": 10}"#,
        r#""phasing": {"k1": 1, "k2": 0},"#,
    );
    let o = refuel(&["compare", "--config", low.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));

    // a target parked on the servicer's slot: no architecture costs anything
    let home = write_config(
        dir.path(),
        "home.json",
        r#"{"inclination_deg": 53, "arg_latitude_deg": 0}"#,
        "",
    );
    let o = refuel(&["critical-ratio", "--config", home.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stdout(&o).contains("1,A-D,,false"));

    let ok = refuel(&["validate", "--config", home.to_str().unwrap()]);
    assert_eq!(ok.status.code(), Some(0));

    let bad_range = refuel(&[
        "critical-ratio",
        "--config",
        home.to_str().unwrap(),
        "--n-range",
        "1..4",
    ]);
    assert_eq!(bad_range.status.code(), Some(2));
    let bad_pair = refuel(&[
        "critical-ratio",
        "--config",
        home.to_str().unwrap(),
        "--pair",
        "B-C",
    ]);
    assert_eq!(bad_pair.status.code(), Some(2));
}

#[test]
fn critical_ratio_range_and_pair_flags() {
    let cfg = shipped("starlink_like.json");
    let o = refuel(&[
        "critical-ratio",
        "--config",
        cfg.to_str().unwrap(),
        "--pair",
        "C-A",
        "--n-range",
        "3..5",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    let ns: Vec<&str> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap())
        .collect();
    assert_eq!(ns, ["3", "4", "5"]);
    assert!(text.lines().skip(1).all(|l| l.contains(",A-C,")));
}

#[test]
fn optimize_echoes_seed_and_beats_compare() {
    let cfg = shipped("set_e.json");
    let c = cfg.to_str().unwrap();
    let o = refuel(&[
        "optimize",
        "--config",
        c,
        "--seed",
        "31337",
        "--starts",
        "10",
        "--mass-ratio",
        "3.5",
    ]);
    assert!(o.status.success());
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["seed"], 31337);
    assert_eq!(report["num_starts"], 10);
    assert_eq!(report["plan"].as_array().unwrap().len(), 12);
    let best = report["initial_mass_kg"].as_f64().unwrap();

    let s = load_config(&cfg).unwrap();
    let cmp = study::compare(&s.constellation, &s.params, 3.5, None).unwrap();
    let fixed = cmp
        .rows
        .iter()
        .map(|r| r.initial_mass_kg)
        .fold(f64::INFINITY, f64::min);
    assert!(best <= fixed + 1e-9);
}

#[test]
fn mirrored_single_target_crosses_at_the_return_leg_factor() {
    // one coplanar target half an orbit away: A and D fly mirror-image tours,
    // and the masses balance where the dry servicer equals the target mass
    // discounted by the servicer's return burn
    let s = parse_config(
        r#"{"constellation": {"altitude_km": 550,
            "servicer": {"inclination_deg": 53, "arg_latitude_deg": 0},
            "targets": [{"inclination_deg": 53, "arg_latitude_deg": 180}]}}"#,
    )
    .unwrap();
    let alpha = study::crossover(&s.constellation, &s.params, Pair::default())
        .unwrap()
        .unwrap();
    let half_orbit_km_s: f64 = 1.701_195_878_786_469_6;
    let expected = (-half_orbit_km_s * 1000.0 / (300.0 * 9.80665)).exp();
    assert!((alpha - expected).abs() < 1e-12, "{alpha} vs {expected}");

    let at = study::compare(&s.constellation, &s.params, alpha, None).unwrap();
    let (a, d) = (at.rows[0].initial_mass_kg, at.rows[3].initial_mass_kg);
    assert!((a - d).abs() / a < 1e-9);
    let one = study::compare(&s.constellation, &s.params, 1.0, None).unwrap();
    assert!(one.rows[3].initial_mass_kg < one.rows[0].initial_mass_kg);
    // in-plane, C is D and B is A; ties go to the earlier letter
    assert_eq!(
        one.rows[2],
        study::ArchitectureRow {
            architecture: "C".into(),
            ..one.rows[3].clone()
        }
    );
    assert_eq!(one.recommendation, "C");
}

#[test]
fn isp_axis_orders_the_crossover() {
    let mut s = load_config(&shipped("starlink_like.json")).unwrap();
    s.params.isp_servicer = 300.0;
    let pairs = [(200.0, 300.0), (300.0, 300.0), (400.0, 300.0)];
    let plan = SweepPlan {
        constellation: &s.constellation,
        params: &s.params,
        mass_ratios: &[1.0],
        n_range: (12, 12),
        isp_pairs: &pairs,
        target_sets: &[None],
        optimizer: None,
    };
    let rows = study::sweep(&plan).unwrap();
    let alpha: Vec<f64> = rows.iter().map(|r| r.critical_ratio_a_d.unwrap()).collect();
    assert!(alpha.windows(2).all(|w| w[1] <= w[0]), "{alpha:?}");
}

#[test]
fn sweep_rows_follow_axis_order_and_recommend_the_lightest() {
    let s = load_config(&shipped("set_b.json")).unwrap();
    let sets = [
        Some(refuel_core::TargetSet::B),
        Some(refuel_core::TargetSet::D),
    ];
    let plan = SweepPlan {
        constellation: &s.constellation,
        params: &s.params,
        mass_ratios: &[0.5, 6.0],
        n_range: (2, 3),
        isp_pairs: &[(300.0, 300.0)],
        target_sets: &sets,
        optimizer: None,
    };
    let rows = study::sweep(&plan).unwrap();
    let keys: Vec<(String, usize, f64)> = rows
        .iter()
        .map(|r| (r.target_set.clone(), r.target_count, r.mass_ratio))
        .collect();
    assert_eq!(
        keys,
        [
            ("b".into(), 2, 0.5),
            ("b".into(), 2, 6.0),
            ("b".into(), 3, 0.5),
            ("b".into(), 3, 6.0),
            ("d".into(), 2, 0.5),
            ("d".into(), 2, 6.0),
            ("d".into(), 3, 0.5),
            ("d".into(), 3, 6.0),
        ]
    );
    for r in &rows {
        let best = r
            .architectures
            .iter()
            .min_by(|a, b| a.initial_mass_kg.total_cmp(&b.initial_mass_kg))
            .unwrap();
        assert_eq!(r.recommendation, best.architecture);
    }
}

#[test]
fn sweep_with_optimizer_adds_e_columns() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "e.json",
        r#"{"inclination_deg": 60, "arg_latitude_deg": 250}, {"inclination_deg": 53.2, "arg_latitude_deg": 100}"#,
        r#""optimizer": {"enabled": true, "num_starts": 6},
           "sweeps": {"mass_ratio": {"start": 1, "stop": 2, "step": 1}},"#,
    );
    let o = refuel(&["sweep", "--config", cfg.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let header = text.lines().next().unwrap();
    assert!(header.contains("initial_mass_e_kg,variable_fuel_e_kg"));
    assert_eq!(text.lines().count(), 1 + 2 * 2);
    for row in 0..4 {
        let e: f64 = cell(&text, row, "initial_mass_e_kg").parse().unwrap();
        for l in ["a", "b", "c", "d"] {
            let m: f64 = cell(&text, row, &format!("initial_mass_{l}_kg"))
                .parse()
                .unwrap();
            // both columns are printed to nine digits
            assert!(e <= m * (1.0 + 1e-8));
        }
    }
}
