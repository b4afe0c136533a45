//! Trade-study commands. Each returns plain rows; rendering lives in `output`.

use rayon::prelude::*;
use refuel_core::campaign::evaluate_plan;
use refuel_core::{
    build_budget, critical_mass_ratio, critical_mass_ratio_a_d, optimize_plan,
    plan_for_architecture, ArchitectureId, CampaignResult, Constellation, Error as CoreError,
    MissionParams, OptimizationReport, TargetSet,
};
use serde::Serialize;

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArchitectureRow {
    pub architecture: String,
    pub initial_mass_kg: f64,
    pub variable_fuel_kg: f64,
    pub servicer_fuel_kg: f64,
    pub target_fuel_kg: f64,
    pub servicer_dv_km_s: f64,
    pub target_dv_km_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareReport {
    pub mass_ratio: f64,
    pub target_count: usize,
    pub rows: Vec<ArchitectureRow>,
    pub recommendation: String,
}

fn row(
    arch: &ArchitectureId,
    c: &Constellation,
    p: &MissionParams,
) -> Result<ArchitectureRow, CoreError> {
    let plan = plan_for_architecture(c, arch);
    let eval = evaluate_plan(c, &plan, p)?;
    Ok(result_row(arch.label(), &eval.result, &eval.budget))
}

fn result_row(label: &str, r: &CampaignResult, b: &refuel_core::CampaignBudget) -> ArchitectureRow {
    ArchitectureRow {
        architecture: label.to_string(),
        initial_mass_kg: r.servicer_initial_mass,
        variable_fuel_kg: r.variable_fuel_mass,
        servicer_fuel_kg: r.servicer_fuel_consumed,
        target_fuel_kg: r.target_fuel_consumed,
        servicer_dv_km_s: b.total_servicer_dv(),
        target_dv_km_s: b.total_target_dv(),
    }
}

/// Label of the lightest row; the earlier row wins ties.
pub fn recommend(rows: &[ArchitectureRow]) -> String {
    let mut best = &rows[0];
    for r in &rows[1..] {
        if r.initial_mass_kg < best.initial_mass_kg {
            best = r;
        }
    }
    best.architecture.clone()
}

fn compare_rows(
    c: &Constellation,
    p: &MissionParams,
    optimizer: Option<&refuel_core::OptimizerConfig>,
) -> Result<Vec<ArchitectureRow>, CoreError> {
    let mut rows = ArchitectureId::FIXED
        .iter()
        .map(|a| row(a, c, p))
        .collect::<Result<Vec<_>, _>>()?;
    if let Some(cfg) = optimizer {
        let report = optimize_plan(c, p, cfg)?;
        let budget = build_budget(c, &report.best_plan)?;
        rows.push(result_row("E", &report.best_result, &budget));
    }
    Ok(rows)
}

/// Evaluates every architecture at `m_s,F = mass_ratio * m_t,I`.
pub fn compare(
    c: &Constellation,
    params: &MissionParams,
    mass_ratio: f64,
    optimizer: Option<&refuel_core::OptimizerConfig>,
) -> Result<CompareReport, CliError> {
    let p = params.with_mass_ratio(mass_ratio);
    let rows = compare_rows(c, &p, optimizer)?;
    Ok(CompareReport {
        mass_ratio,
        target_count: c.len(),
        recommendation: recommend(&rows),
        rows,
    })
}

/// Architecture pair for a crossover. The first is always A.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pair {
    pub cooperative: char,
}

impl Default for Pair {
    fn default() -> Self {
        Pair { cooperative: 'D' }
    }
}

impl Pair {
    /// Parses `X-Y` where one side is `A` and the other `B`, `C` or `D`.
    pub fn parse(s: &str) -> Result<Self, CliError> {
        let bad = || CliError::Usage(format!("pair {s:?} must be A-B, A-C or A-D (either order)"));
        let (x, y) = s.split_once('-').ok_or_else(bad)?;
        let (x, y) = (x.trim().to_ascii_uppercase(), y.trim().to_ascii_uppercase());
        let other = match (x.as_str(), y.as_str()) {
            ("A", o) | (o, "A") => o.to_string(),
            _ => return Err(bad()),
        };
        match other.as_str() {
            "B" | "C" | "D" => Ok(Pair {
                cooperative: other.chars().next().unwrap_or('D'),
            }),
            _ => Err(bad()),
        }
    }

    pub fn label(&self) -> String {
        format!("A-{}", self.cooperative)
    }

    fn architecture(&self) -> ArchitectureId {
        ArchitectureId::parse_fixed(&self.cooperative.to_string()).unwrap_or(ArchitectureId::D)
    }
}

/// Crossover ratio between A and `pair` for `c` and `p`; `None` when the
/// two never cross.
pub fn crossover(
    c: &Constellation,
    p: &MissionParams,
    pair: Pair,
) -> Result<Option<f64>, CoreError> {
    let non = build_budget(c, &plan_for_architecture(c, &ArchitectureId::A))?;
    let coop = build_budget(c, &plan_for_architecture(c, &pair.architecture()))?;
    let alpha = match pair.cooperative {
        'D' => critical_mass_ratio_a_d(&non, &coop, p),
        _ => critical_mass_ratio(&coop, &non, p),
    };
    match alpha {
        Ok(a) => Ok(Some(a)),
        Err(CoreError::NoCrossover) => Ok(None),
        Err(e) => Err(e),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalRow {
    pub target_count: usize,
    pub pair: String,
    /// `None` when the pair never crosses.
    pub critical_ratio: Option<f64>,
}

/// Crossover ratio for the first `n` targets, for each `n` in the range.
pub fn critical_ratio(
    c: &Constellation,
    params: &MissionParams,
    pair: Pair,
    (first, last): (usize, usize),
) -> Result<Vec<CriticalRow>, CliError> {
    (first..=last)
        .into_par_iter()
        .map(|n| {
            let alpha = crossover(&c.truncated(n), &params.truncated(n), pair)?;
            Ok(CriticalRow {
                target_count: n,
                pair: pair.label(),
                critical_ratio: alpha,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub target_set: String,
    pub isp_target_s: f64,
    pub isp_servicer_s: f64,
    pub target_count: usize,
    pub mass_ratio: f64,
    pub architectures: Vec<ArchitectureRow>,
    pub critical_ratio_a_b: Option<f64>,
    pub critical_ratio_a_c: Option<f64>,
    pub critical_ratio_a_d: Option<f64>,
    pub recommendation: String,
}

pub struct SweepPlan<'a> {
    pub constellation: &'a Constellation,
    pub params: &'a MissionParams,
    pub mass_ratios: &'a [f64],
    pub n_range: (usize, usize),
    pub isp_pairs: &'a [(f64, f64)],
    pub target_sets: &'a [Option<TargetSet>],
    pub optimizer: Option<&'a refuel_core::OptimizerConfig>,
}

/// Cartesian sweep, ordered by target set, Isp pair, target count, then ratio.
pub fn sweep(plan: &SweepPlan<'_>) -> Result<Vec<SweepRow>, CliError> {
    let mut points = Vec::new();
    for &set in plan.target_sets {
        for &isp in plan.isp_pairs {
            for n in plan.n_range.0..=plan.n_range.1 {
                for &ratio in plan.mass_ratios {
                    points.push((set, isp, n, ratio));
                }
            }
        }
    }
    points
        .into_par_iter()
        .map(|(set, (isp_t, isp_s), n, ratio)| {
            let full = match set {
                Some(s) => s.apply(plan.constellation),
                None => plan.constellation.clone(),
            };
            let c = full.truncated(n);
            let p = MissionParams {
                isp_target: isp_t,
                isp_servicer: isp_s,
                ..plan.params.truncated(n)
            }
            .with_mass_ratio(ratio);
            let architectures = compare_rows(&c, &p, plan.optimizer)?;
            let alpha = |x| crossover(&c, &p, Pair { cooperative: x });
            Ok(SweepRow {
                target_set: set.map_or("config", |s| s.label()).to_string(),
                isp_target_s: isp_t,
                isp_servicer_s: isp_s,
                target_count: n,
                mass_ratio: ratio,
                critical_ratio_a_b: alpha('B')?,
                critical_ratio_a_c: alpha('C')?,
                critical_ratio_a_d: alpha('D')?,
                recommendation: recommend(&architectures),
                architectures,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlanPointRow {
    pub target: usize,
    pub inclination_deg: f64,
    pub arg_latitude_deg: f64,
    pub servicer_dv_km_s: f64,
    pub target_in_dv_km_s: f64,
    pub target_out_dv_km_s: f64,
    pub refuel_kg: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimizeOutput {
    pub seed: u64,
    pub num_starts: usize,
    pub mass_ratio: f64,
    pub initial_mass_kg: f64,
    pub variable_fuel_kg: f64,
    pub best_fixed_architecture: String,
    pub best_fixed_initial_mass_kg: f64,
    pub matched_architecture: Option<String>,
    pub best_start: usize,
    pub return_dv_km_s: f64,
    pub plan: Vec<PlanPointRow>,
    pub per_start_objective_kg: Vec<f64>,
}

pub fn optimize(
    c: &Constellation,
    params: &MissionParams,
    mass_ratio: f64,
    cfg: &refuel_core::OptimizerConfig,
) -> Result<OptimizeOutput, CliError> {
    let p = params.with_mass_ratio(mass_ratio);
    let report: OptimizationReport = optimize_plan(c, &p, cfg)?;
    let fixed = compare_rows(c, &p, None)?;
    let best_fixed = recommend(&fixed);
    let best_fixed_mass = fixed
        .iter()
        .find(|r| r.architecture == best_fixed)
        .map_or(f64::NAN, |r| r.initial_mass_kg);
    let budget = build_budget(c, &report.best_plan)?;
    let plan = report
        .best_plan
        .points
        .iter()
        .zip(&budget.legs)
        .zip(&report.best_result.per_leg_refuel_mass)
        .enumerate()
        .map(|(j, ((pt, leg), &m_r))| PlanPointRow {
            target: j + 1,
            inclination_deg: pt.inclination.to_degrees(),
            arg_latitude_deg: pt.arg_latitude.to_degrees(),
            servicer_dv_km_s: leg.dv_servicer,
            target_in_dv_km_s: leg.dv_target_in,
            target_out_dv_km_s: leg.dv_target_out,
            refuel_kg: m_r,
        })
        .collect();
    Ok(OptimizeOutput {
        seed: cfg.rng_seed,
        num_starts: cfg.num_starts,
        mass_ratio,
        initial_mass_kg: report.best_result.servicer_initial_mass,
        variable_fuel_kg: report.best_result.variable_fuel_mass,
        best_fixed_architecture: best_fixed,
        best_fixed_initial_mass_kg: best_fixed_mass,
        matched_architecture: report.matched_architecture.map(|a| a.label().to_string()),
        best_start: report.best_start,
        return_dv_km_s: budget.dv_servicer_return,
        plan,
        per_start_objective_kg: report.per_start_history.iter().map(|h| h.1).collect(),
    })
}
