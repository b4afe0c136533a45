//! Acceptance criteria. Runs every criterion and prints one
//! `criterion N: PASS|FAIL` line each; exits non-zero if any fail.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use refuel_cli::output::{render_optimize, Format};
use refuel_cli::study::{self, crossover, Pair};
use refuel_cli::{load_config, parse_config, Study};
use refuel_core::optimizer::plan_objective;
use refuel_core::{
    evaluate_architecture, optimize_plan, servicer_initial_mass_cooperative,
    servicer_initial_mass_noncooperative, simulate_masses, ArchitectureId, CampaignBudget,
    Constellation, LegBudget, MissionParams, OptimizerConfig, RendezvousPlan, RendezvousPoint,
};

const SHIPPED: [&str; 5] = [
    "starlink_like.json",
    "set_b.json",
    "set_c.json",
    "set_d.json",
    "set_e.json",
];

fn shipped(name: &str) -> Study {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../configs")
        .join(name);
    load_config(&path).unwrap()
}

type Outcome = (bool, String);

fn alpha_a_d(s: &Study, n: usize, params: &MissionParams) -> f64 {
    crossover(
        &s.constellation.truncated(n),
        &params.truncated(n),
        Pair::default(),
    )
    .unwrap()
    .expect("A and D cross")
}

fn criterion_1_closed_form_matches_sequential_simulation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let cases = 1000;
    for _ in 0..cases {
        let n = rng.gen_range(1..=12);
        let legs = (0..n)
            .map(|_| LegBudget {
                dv_servicer: 3.0 * rng.gen::<f64>(),
                dv_target_in: 3.0 * rng.gen::<f64>(),
                dv_target_out: 3.0 * rng.gen::<f64>(),
            })
            .collect();
        let budget = CampaignBudget::new(legs, 3.0 * rng.gen::<f64>());
        let params = MissionParams::reference(n, 1000.0).with_mass_ratio(rng.gen_range(0.1..8.0));
        let closed = servicer_initial_mass_cooperative(&budget, &params).unwrap();
        let seq = simulate_masses(&budget, &params).unwrap();
        let rel = (closed.servicer_initial_mass - seq.servicer_initial_mass).abs()
            / seq.servicer_initial_mass;
        worst = worst.max(rel);

        // servicer-only variant through the non-cooperative form
        let plain = CampaignBudget::new(
            budget
                .legs
                .iter()
                .map(|l| LegBudget::servicer_only(l.dv_servicer))
                .collect(),
            budget.dv_servicer_return,
        );
        let closed = servicer_initial_mass_noncooperative(&plain, &params).unwrap();
        let seq = simulate_masses(&plain, &params).unwrap();
        worst = worst.max(
            (closed.servicer_initial_mass - seq.servicer_initial_mass).abs()
                / seq.servicer_initial_mass,
        );
    }
    let elapsed = start.elapsed();
    (
        worst < 1e-12 && elapsed < Duration::from_secs(5),
        format!("{cases} campaigns, worst relative error {worst:.3e}, {elapsed:.2?}"),
    )
}

fn criterion_2_single_mirrored_target_crosses_at_one() -> Outcome {
    // coplanar target half an orbit away, equal Isp: D's target tour is the
    // mirror image of A's servicer tour
    let s = parse_config(
        r#"{"constellation": {"altitude_km": 550,
            "servicer": {"inclination_deg": 53, "arg_latitude_deg": 0},
            "targets": [{"inclination_deg": 53, "arg_latitude_deg": 180}]}}"#,
    )
    .unwrap();
    let alpha = alpha_a_d(&s, 1, &s.params);
    let p = s.params.with_mass_ratio(1.0);
    let a = evaluate_architecture(&s.constellation, &ArchitectureId::A, &p)
        .unwrap()
        .servicer_initial_mass;
    let d = evaluate_architecture(&s.constellation, &ArchitectureId::D, &p)
        .unwrap()
        .servicer_initial_mass;
    let rel = (a - d).abs() / a.max(d);
    ((alpha - 1.0).abs() <= 1e-6 && rel < 1e-9,
        format!(
            "alpha_A-D = {alpha:.9} (want 1 +/- 1e-6); at ratio 1.0 A = {a:.6} kg, D = {d:.6} kg, relative gap {rel:.3e}"
        ),
    )
}

fn criterion_3_crossover_balances_masses() -> Outcome {
    let mut checked = 0;
    let mut worst: f64 = 0.0;
    let mut flips = true;
    for name in SHIPPED {
        let s = shipped(name);
        for n in 1..=s.constellation.len() {
            let c = s.constellation.truncated(n);
            let p = s.params.truncated(n);
            for coop in ['B', 'C', 'D'] {
                let Some(alpha) = crossover(&c, &p, Pair { cooperative: coop }).unwrap() else {
                    continue;
                };
                if alpha <= 0.0 {
                    continue;
                }
                let arch = ArchitectureId::parse_fixed(&coop.to_string()).unwrap();
                let gap = |ratio: f64| {
                    let q = p.with_mass_ratio(ratio);
                    let x = evaluate_architecture(&c, &ArchitectureId::A, &q).unwrap();
                    let y = evaluate_architecture(&c, &arch, &q).unwrap();
                    (
                        y.servicer_initial_mass - x.servicer_initial_mass,
                        x.servicer_initial_mass,
                    )
                };
                let (at, scale) = gap(alpha);
                worst = worst.max(at.abs() / scale);
                let below = gap(alpha * 0.99).0;
                let above = gap(alpha * 1.01).0;
                flips &= below.signum() != above.signum() && below != 0.0 && above != 0.0;
                checked += 1;
            }
        }
    }
    (checked > 0 && worst < 1e-9 && flips,
        format!("{checked} crossovers, worst relative imbalance {worst:.3e}, sign flips across every one: {flips}"),
    )
}

fn criterion_4_coplanar_crossover_grows_with_target_count() -> Outcome {
    let s = shipped("set_b.json");
    let alpha: Vec<f64> = (1..=12).map(|n| alpha_a_d(&s, n, &s.params)).collect();
    let increasing = alpha.windows(2).all(|w| w[1] > w[0]);
    let shown: Vec<String> = alpha.iter().map(|a| format!("{a:.4}")).collect();
    (
        increasing,
        format!("Set b alpha_A-D(n = 1..12) = [{}]", shown.join(", ")),
    )
}

fn criterion_5_plane_change_drops_the_crossover() -> Outcome {
    let s = shipped("starlink_like.json");
    let (six, seven) = (alpha_a_d(&s, 6, &s.params), alpha_a_d(&s, 7, &s.params));
    (
        seven < six,
        format!("Set a alpha_A-D(6) = {six:.6}, alpha_A-D(7) = {seven:.6}"),
    )
}

fn criterion_6_isp_monotonicity() -> Outcome {
    let isps = [200.0, 300.0, 400.0];
    let mut ok = true;
    let mut detail = Vec::new();
    for name in ["starlink_like.json", "set_b.json"] {
        let s = shipped(name);
        let n = s.constellation.len();
        let grid: Vec<Vec<f64>> = isps
            .iter()
            .map(|&isp_t| {
                isps.iter()
                    .map(|&isp_s| {
                        let p = MissionParams {
                            isp_target: isp_t,
                            isp_servicer: isp_s,
                            ..s.params.clone()
                        };
                        alpha_a_d(&s, n, &p)
                    })
                    .collect()
            })
            .collect();
        for t in 0..3 {
            for v in 0..3 {
                if t + 1 < 3 && grid[t + 1][v] > grid[t][v] {
                    ok = false;
                }
                if v + 1 < 3 && grid[t][v + 1] < grid[t][v] {
                    ok = false;
                }
            }
        }
        let rows: Vec<String> = grid
            .iter()
            .map(|r| format!("[{:.4}, {:.4}, {:.4}]", r[0], r[1], r[2]))
            .collect();
        detail.push(format!("{name}: {}", rows.join(" ")));
    }
    (
        ok,
        format!(
            "alpha_A-D rows Isp_t = 200/300/400 s, columns Isp_s = 200/300/400 s; {}",
            detail.join("; ")
        ),
    )
}

fn criterion_7_optimizer_never_loses_to_fixed_architectures() -> Outcome {
    let cfg = OptimizerConfig::default();
    let mut ok = true;
    let mut slowest = Duration::ZERO;
    let mut worst_margin = f64::NEG_INFINITY;
    for name in SHIPPED {
        let s = shipped(name);
        let started = Instant::now();
        let mut first = Vec::new();
        for ratio in [0.5, 3.5, 6.0] {
            let out = study::optimize(&s.constellation, &s.params, ratio, &cfg).unwrap();
            worst_margin = worst_margin.max(out.initial_mass_kg - out.best_fixed_initial_mass_kg);
            ok &= out.initial_mass_kg <= out.best_fixed_initial_mass_kg + 1e-9;
            first.push(render_optimize(&out, Format::Json).unwrap());
        }
        slowest = slowest.max(started.elapsed());
        for (k, ratio) in [0.5, 3.5, 6.0].into_iter().enumerate() {
            let again = study::optimize(&s.constellation, &s.params, ratio, &cfg).unwrap();
            ok &= render_optimize(&again, Format::Json).unwrap() == first[k];
        }
    }
    ok &= slowest < Duration::from_secs(60);
    (ok,
        format!(
            "5 configs x 3 ratios, max (E - best of A-D) = {worst_margin:.3e} kg, reruns identical, slowest config {slowest:.2?}"
        ),
    )
}

fn grid_optimum(c: &Constellation, p: &MissionParams) -> (f64, f64) {
    let (lo, hi) = c.inclination_span();
    let (lo_deg, hi_deg) = (lo.to_degrees(), hi.to_degrees());
    let mut incl: Vec<f64> = (0..)
        .map(|k| lo_deg + 0.5 * k as f64)
        .take_while(|i| *i < hi_deg - 1e-9)
        .collect();
    incl.push(hi_deg);
    let lat: Vec<f64> = (0..720).map(|k| 0.5 * k as f64).collect();
    let f = |a: usize, b: usize| {
        let plan = RendezvousPlan {
            points: vec![RendezvousPoint {
                inclination: incl[a].to_radians(),
                arg_latitude: lat[b].to_radians(),
            }],
        };
        plan_objective(c, &plan, p)
    };
    let mut best = (f64::INFINITY, 0, 0);
    for a in 0..incl.len() {
        for b in 0..lat.len() {
            let v = f(a, b);
            if v < best.0 {
                best = (v, a, b);
            }
        }
    }
    let (v, a, b) = best;
    let mut spread: f64 = 0.0;
    let neighbours = [
        (a.checked_sub(1), Some(b)),
        (Some(a + 1).filter(|x| *x < incl.len()), Some(b)),
        (Some(a), Some((b + 719) % 720)),
        (Some(a), Some((b + 1) % 720)),
    ];
    for (x, y) in neighbours {
        if let (Some(x), Some(y)) = (x, y) {
            let w = f(x, y);
            if w.is_finite() {
                spread = spread.max((w - v).abs());
            }
        }
    }
    (v, spread)
}

fn criterion_8_single_target_optimum_matches_grid_search() -> Outcome {
    let started = Instant::now();
    let s = shipped("starlink_like.json");
    let cfg = OptimizerConfig::default();
    let mut ok = true;
    let mut cases = 0;
    let mut worst_gap = f64::NEG_INFINITY;
    for j in [0, 4, 8, 11] {
        let c = Constellation {
            targets: vec![s.constellation.targets[j]],
            ..s.constellation.clone()
        };
        for ratio in [0.5, 3.5, 6.0] {
            let p = s.params.truncated(1).with_mass_ratio(ratio);
            let (grid, spread) = grid_optimum(&c, &p);
            let best = optimize_plan(&c, &p, &cfg)
                .unwrap()
                .best_result
                .servicer_initial_mass;
            worst_gap = worst_gap.max((best - grid) / spread.max(f64::MIN_POSITIVE));
            ok &= best <= grid + 1e-9 && grid - best <= spread;
            cases += 1;
        }
    }
    let elapsed = started.elapsed();
    ok &= elapsed < Duration::from_secs(30);
    (ok,
        format!(
            "{cases} single-target cases on a 0.5 deg grid, max (optimum - grid) / cell spread = {worst_gap:.3}, {elapsed:.2?}"
        ),
    )
}

fn criterion_9_regime_recommendations_for_set_a() -> Outcome {
    let s = shipped("starlink_like.json");
    let ratios: Vec<f64> = (1..=12).map(|k| 0.5 * k as f64).collect();
    let mut diffs = Vec::new();
    let mut recs = Vec::new();
    for &r in &ratios {
        let cmp = study::compare(&s.constellation, &s.params, r, None).unwrap();
        let fuel = |l: &str| {
            cmp.rows
                .iter()
                .find(|x| x.architecture == l)
                .unwrap()
                .variable_fuel_kg
        };
        diffs.push(fuel("D") - fuel("A"));
        recs.push(cmp.recommendation);
    }
    let changes = diffs
        .windows(2)
        .filter(|w| w[0].signum() != w[1].signum())
        .count();
    let first = &recs[0];
    let last = &recs[recs.len() - 1];
    (first == "A" && last == "D" && changes == 1,
        format!(
            "recommendation {first} at 0.5 (want A), {last} at 6.0 (want D); D - A fuel sign changes: {changes} (want 1); D - A at 0.5 = {:.1} kg, at 6.0 = {:.1} kg",
            diffs[0],
            diffs[diffs.len() - 1]
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(u32, fn() -> Outcome); 9] = [
        (1, criterion_1_closed_form_matches_sequential_simulation),
        (2, criterion_2_single_mirrored_target_crosses_at_one),
        (3, criterion_3_crossover_balances_masses),
        (4, criterion_4_coplanar_crossover_grows_with_target_count),
        (5, criterion_5_plane_change_drops_the_crossover),
        (6, criterion_6_isp_monotonicity),
        (7, criterion_7_optimizer_never_loses_to_fixed_architectures),
        (8, criterion_8_single_target_optimum_matches_grid_search),
        (9, criterion_9_regime_recommendations_for_set_a),
    ];
    let mut failed = Vec::new();
    for (n, check) in criteria {
        let (pass, detail) = match std::panic::catch_unwind(check) {
            Ok(outcome) => outcome,
            Err(_) => (false, "panicked".to_string()),
        };
        println!(
            "criterion {n}: {} - {detail}",
            if pass { "PASS" } else { "FAIL" }
        );
        if !pass {
            failed.push(n);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all 9 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!(
            "acceptance: {} of 9 criteria fail: {failed:?}",
            failed.len()
        );
        ExitCode::FAILURE
    }
}
