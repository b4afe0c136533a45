//! Architecture E: multistart pattern search over the rendezvous points.

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::campaign::{
    build_budget, plan_for_architecture, ArchitectureId, Constellation, RendezvousPlan,
    RendezvousPoint,
};
use crate::error::{Error, Result};
use crate::massmodel::{servicer_initial_mass_cooperative, CampaignResult, MissionParams};
use crate::orbits::wrap_angle;

/// Coordinates closer than this to a fixed architecture's plan count as a match [rad].
pub const MATCH_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OptimizerConfig {
    /// Total starts, the first four being plans A to D.
    pub num_starts: usize,
    pub rng_seed: u64,
    /// Cap on pattern-search sweeps per start.
    pub max_local_iterations: usize,
    /// Stop once no probe moves the objective by this much [kg].
    pub convergence_tolerance: f64,
    /// Inclination bounds [rad]; `None` spans the servicer and targets.
    pub bounds_inclination: Option<(f64, f64)>,
    /// First probe step for every coordinate [rad].
    pub initial_step: f64,
    /// Search stops when the step falls below this [rad].
    pub min_step: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            num_starts: 44,
            rng_seed: 0,
            max_local_iterations: 500,
            convergence_tolerance: 1e-3,
            bounds_inclination: None,
            initial_step: 5f64.to_radians(),
            min_step: 1e-9,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.num_starts == 0 {
            return Err(Error::InvalidInput("num_starts must be at least 1".into()));
        }
        if self.max_local_iterations == 0 {
            return Err(Error::InvalidInput(
                "max_local_iterations must be at least 1".into(),
            ));
        }
        if !(self.convergence_tolerance.is_finite() && self.convergence_tolerance > 0.0) {
            return Err(Error::InvalidInput(format!(
                "convergence_tolerance must be positive, got {}",
                self.convergence_tolerance
            )));
        }
        if !(self.initial_step.is_finite() && self.initial_step > 0.0) {
            return Err(Error::InvalidInput("initial_step must be positive".into()));
        }
        if !(self.min_step.is_finite() && self.min_step > 0.0) {
            return Err(Error::InvalidInput("min_step must be positive".into()));
        }
        if let Some((lo, hi)) = self.bounds_inclination {
            if !(lo.is_finite() && hi.is_finite() && 0.0 <= lo && lo <= hi && hi <= PI) {
                return Err(Error::InfeasibleBounds(format!(
                    "inclination bounds [{lo}, {hi}] rad are not an interval inside [0, pi]"
                )));
            }
        }
        Ok(())
    }

    fn inclination_bounds(&self) -> (f64, f64) {
        self.bounds_inclination.unwrap_or((0.0, PI))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizationReport {
    pub best_plan: RendezvousPlan,
    pub best_result: CampaignResult,
    /// Set when every coordinate of `best_plan` sits on plan A, B, C or D.
    pub matched_architecture: Option<ArchitectureId>,
    /// Index of the start that produced `best_plan`.
    pub best_start: usize,
    /// `(start index, final objective)` in start order. Infeasible starts report infinity.
    pub per_start_history: Vec<(usize, f64)>,
}

/// Servicer initial mass for `plan`, or infinity when any leg is infeasible.
pub fn plan_objective(c: &Constellation, plan: &RendezvousPlan, params: &MissionParams) -> f64 {
    build_budget(c, plan)
        .and_then(|b| servicer_initial_mass_cooperative(&b, params))
        .map_or(f64::INFINITY, |r| r.servicer_initial_mass)
}

pub fn optimize_plan(
    c: &Constellation,
    params: &MissionParams,
    cfg: &OptimizerConfig,
) -> Result<OptimizationReport> {
    c.validate()?;
    params.validate()?;
    cfg.validate()?;
    if params.target_count != c.len() {
        return Err(Error::InvalidInput(format!(
            "mission expects {} targets but the constellation has {}",
            params.target_count,
            c.len()
        )));
    }
    let (lo, hi) = cfg
        .bounds_inclination
        .unwrap_or_else(|| c.inclination_span());
    let outside = |i: f64| i < lo || i > hi;
    if outside(c.servicer.inclination) {
        return Err(Error::InfeasibleBounds(format!(
            "servicer inclination {} rad lies outside [{lo}, {hi}]",
            c.servicer.inclination
        )));
    }
    if let Some(j) = c.targets.iter().position(|t| outside(t.inclination)) {
        return Err(Error::InfeasibleBounds(format!(
            "target {} inclination {} rad lies outside [{lo}, {hi}]",
            j + 1,
            c.targets[j].inclination
        )));
    }
    let cfg = OptimizerConfig {
        bounds_inclination: Some((lo, hi)),
        ..cfg.clone()
    };

    let starts = starting_plans(c, &cfg);
    let objective = |p: &RendezvousPlan| plan_objective(c, p, params);
    let finished: Vec<(RendezvousPlan, f64)> = starts
        .into_par_iter()
        .map(|start| local_refine(&start, &objective, &cfg))
        .collect();

    let per_start_history: Vec<(usize, f64)> =
        finished.iter().map(|(_, f)| *f).enumerate().collect();
    let mut best_start = 0;
    for (k, &(_, f)) in per_start_history.iter().enumerate() {
        if f < per_start_history[best_start].1 {
            best_start = k;
        }
    }
    let best_plan = finished[best_start].0.clone();
    if !per_start_history[best_start].1.is_finite() {
        return Err(Error::InvalidInput(
            "no feasible rendezvous plan found from any start".into(),
        ));
    }
    let best_result =
        build_budget(c, &best_plan).and_then(|b| servicer_initial_mass_cooperative(&b, params))?;
    let matched_architecture = ArchitectureId::FIXED
        .into_iter()
        .find(|a| plans_coincide(&best_plan, &plan_for_architecture(c, a)));

    Ok(OptimizationReport {
        best_plan,
        best_result,
        matched_architecture,
        best_start,
        per_start_history,
    })
}

/// Plans A to D followed by uniform random plans, all drawn up front so the
/// outcome does not depend on thread scheduling.
fn starting_plans(c: &Constellation, cfg: &OptimizerConfig) -> Vec<RendezvousPlan> {
    let (lo, hi) = cfg.inclination_bounds();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    let mut starts: Vec<RendezvousPlan> = ArchitectureId::FIXED
        .iter()
        .map(|a| plan_for_architecture(c, a))
        .take(cfg.num_starts)
        .collect();
    while starts.len() < cfg.num_starts {
        let points = (0..c.len())
            .map(|_| RendezvousPoint {
                inclination: lo + (hi - lo) * rng.gen::<f64>(),
                arg_latitude: TAU * rng.gen::<f64>(),
            })
            .collect();
        starts.push(RendezvousPlan { points });
    }
    starts
}

fn plans_coincide(a: &RendezvousPlan, b: &RendezvousPlan) -> bool {
    a.len() == b.len()
        && a.points.iter().zip(&b.points).all(|(p, q)| {
            let du = wrap_angle(p.arg_latitude - q.arg_latitude);
            (p.inclination - q.inclination).abs() <= MATCH_TOLERANCE
                && du.min(TAU - du) <= MATCH_TOLERANCE
        })
}

fn nudge(plan: &RendezvousPlan, coord: usize, delta: f64, (lo, hi): (f64, f64)) -> RendezvousPlan {
    let mut next = plan.clone();
    let p = &mut next.points[coord / 2];
    if coord.is_multiple_of(2) {
        p.inclination = (p.inclination + delta).clamp(lo, hi);
    } else {
        p.arg_latitude = wrap_angle(p.arg_latitude + delta);
    }
    next
}

/// Coordinate pattern search from `start`.
///
/// Each sweep probes every coordinate at `+step` then `-step` and keeps the
/// first strict improvement. A sweep without one halves the step.
pub fn local_refine<F>(
    start: &RendezvousPlan,
    objective: &F,
    cfg: &OptimizerConfig,
) -> (RendezvousPlan, f64)
where
    F: Fn(&RendezvousPlan) -> f64,
{
    let bounds = cfg.inclination_bounds();
    let mut plan = start.clone();
    let mut value = objective(&plan);
    let mut step = cfg.initial_step;
    let dims = 2 * plan.len();

    for _ in 0..cfg.max_local_iterations {
        let mut improved = false;
        let mut largest_change: f64 = 0.0;
        for coord in 0..dims {
            for delta in [step, -step] {
                let probe = nudge(&plan, coord, delta, bounds);
                let f = objective(&probe);
                if f.is_finite() && value.is_finite() {
                    largest_change = largest_change.max((f - value).abs());
                }
                if f < value {
                    plan = probe;
                    value = f;
                    improved = true;
                    break;
                }
            }
        }
        if improved {
            continue;
        }
        if value.is_finite() && largest_change < cfg.convergence_tolerance {
            break;
        }
        step *= 0.5;
        if step < cfg.min_step {
            break;
        }
    }
    (plan, value)
}
