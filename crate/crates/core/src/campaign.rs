//! Refueling tours: who flies where on each leg, and the resulting budgets.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::massmodel::{
    rocket_mass_before, servicer_initial_mass_cooperative, CampaignBudget, CampaignResult,
    LegBudget, MissionParams,
};
use crate::orbits::{transfer_delta_v, CircularOrbit, GravityModel, PhasingPolicy};

/// A servicer and its ordered list of targets on one altitude shell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Constellation {
    pub servicer: CircularOrbit,
    /// Visit order is list order.
    pub targets: Vec<CircularOrbit>,
    pub gravity: GravityModel,
    pub phasing: PhasingPolicy,
}

impl Constellation {
    pub fn new(
        servicer: CircularOrbit,
        targets: Vec<CircularOrbit>,
        gravity: GravityModel,
        phasing: PhasingPolicy,
    ) -> Result<Self> {
        let c = Self {
            servicer,
            targets,
            gravity,
            phasing,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        self.gravity.validate()?;
        self.phasing.validate()?;
        self.servicer.validate()?;
        if self.targets.is_empty() {
            return Err(Error::InvalidInput("constellation has no targets".into()));
        }
        for (j, t) in self.targets.iter().enumerate() {
            t.validate()
                .map_err(|e| Error::InvalidInput(format!("target {}: {e}", j + 1)))?;
            if t.altitude != self.servicer.altitude {
                return Err(Error::InvalidInput(format!(
                    "target {} altitude {} km differs from the servicer shell at {} km",
                    j + 1,
                    t.altitude,
                    self.servicer.altitude
                )));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }

    /// The same campaign restricted to the first `n` targets.
    pub fn truncated(&self, n: usize) -> Self {
        Self {
            targets: self.targets.iter().take(n).copied().collect(),
            ..self.clone()
        }
    }

    /// Lowest and highest inclination among the servicer and all targets [rad].
    pub fn inclination_span(&self) -> (f64, f64) {
        self.targets.iter().map(|t| t.inclination).fold(
            (self.servicer.inclination, self.servicer.inclination),
            |(lo, hi), i| (lo.min(i), hi.max(i)),
        )
    }
}

/// Where a refuel happens: an inclination and argument of latitude [rad].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RendezvousPoint {
    pub inclination: f64,
    pub arg_latitude: f64,
}

impl RendezvousPoint {
    pub fn of(orbit: &CircularOrbit) -> Self {
        Self {
            inclination: orbit.inclination,
            arg_latitude: orbit.arg_latitude,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RendezvousPlan {
    pub points: Vec<RendezvousPoint>,
}

impl RendezvousPlan {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Who maneuvers on each leg.
///
/// * `A`: servicer does everything, targets stay put.
/// * `B`: targets change plane, servicer phases.
/// * `C`: servicer changes plane, targets phase.
/// * `D`: targets do everything, servicer never leaves its slot.
/// * `E`: an explicit (usually optimized) plan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ArchitectureId {
    A,
    B,
    C,
    D,
    E(RendezvousPlan),
}

impl ArchitectureId {
    pub const FIXED: [ArchitectureId; 4] = [
        ArchitectureId::A,
        ArchitectureId::B,
        ArchitectureId::C,
        ArchitectureId::D,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            ArchitectureId::A => "A",
            ArchitectureId::B => "B",
            ArchitectureId::C => "C",
            ArchitectureId::D => "D",
            ArchitectureId::E(_) => "E",
        }
    }

    /// Parses `A`..`D` (case-insensitive). `E` needs a plan and is not parsed.
    pub fn parse_fixed(s: &str) -> Option<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Some(ArchitectureId::A),
            "B" => Some(ArchitectureId::B),
            "C" => Some(ArchitectureId::C),
            "D" => Some(ArchitectureId::D),
            _ => None,
        }
    }
}

impl fmt::Display for ArchitectureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

pub fn plan_for_architecture(c: &Constellation, arch: &ArchitectureId) -> RendezvousPlan {
    let s = &c.servicer;
    let point = |t: &CircularOrbit| match arch {
        ArchitectureId::A => RendezvousPoint::of(t),
        ArchitectureId::B => RendezvousPoint {
            inclination: s.inclination,
            arg_latitude: t.arg_latitude,
        },
        ArchitectureId::C => RendezvousPoint {
            inclination: t.inclination,
            arg_latitude: s.arg_latitude,
        },
        ArchitectureId::D | ArchitectureId::E(_) => RendezvousPoint::of(s),
    };
    match arch {
        ArchitectureId::E(plan) => plan.clone(),
        _ => RendezvousPlan {
            points: c.targets.iter().map(point).collect(),
        },
    }
}

fn hop(c: &Constellation, from: &CircularOrbit, to: &RendezvousPoint) -> Result<f64> {
    // whoever flies the phasing burn chases the slot it is heading for
    transfer_delta_v(
        from,
        to.inclination,
        to.arg_latitude,
        true,
        &c.phasing,
        &c.gravity,
    )
}

/// Delta-v split for every leg of the tour defined by `plan`.
///
/// The servicer threads through the rendezvous points in order and finally
/// returns to its own slot. Each target flies to its rendezvous point and
/// then back to the slot it would occupy had it never moved.
pub fn build_budget(c: &Constellation, plan: &RendezvousPlan) -> Result<CampaignBudget> {
    if plan.len() != c.len() {
        return Err(Error::InvalidInput(format!(
            "plan has {} rendezvous points for {} targets",
            plan.len(),
            c.len()
        )));
    }
    let mut servicer = c.servicer;
    let mut legs = Vec::with_capacity(c.len());
    for (j, (target, point)) in c.targets.iter().zip(&plan.points).enumerate() {
        let leg_no = j + 1;
        let dv_servicer = hop(c, &servicer, point).map_err(|e| e.at_leg(leg_no))?;
        let dv_target_in = hop(c, target, point).map_err(|e| e.at_leg(leg_no))?;
        let meet = target.with_slot(point.inclination, point.arg_latitude);
        let dv_target_out =
            hop(c, &meet, &RendezvousPoint::of(target)).map_err(|e| e.at_leg(leg_no))?;
        legs.push(LegBudget {
            dv_servicer,
            dv_target_in,
            dv_target_out,
        });
        servicer = servicer.with_slot(point.inclination, point.arg_latitude);
    }
    let dv_return =
        hop(c, &servicer, &RendezvousPoint::of(&c.servicer)).map_err(|e| e.at_leg(c.len() + 1))?;
    Ok(CampaignBudget::new(legs, dv_return))
}

/// Servicer positions visited by `plan`: the start, every rendezvous, and home.
pub fn servicer_track(c: &Constellation, plan: &RendezvousPlan) -> Vec<RendezvousPoint> {
    let home = RendezvousPoint::of(&c.servicer);
    std::iter::once(home)
        .chain(plan.points.iter().copied())
        .chain(std::iter::once(home))
        .collect()
}

/// Leg-by-leg mass bookkeeping, walked backwards from the dry servicer.
///
/// Shares nothing with the closed-form path except the rocket equation, so
/// it doubles as a cross-check for it.
pub fn simulate_masses(budget: &CampaignBudget, params: &MissionParams) -> Result<CampaignResult> {
    params.validate()?;
    budget.validate(params)?;
    let (isp_s, isp_t, g0) = (params.isp_servicer, params.isp_target, params.g0);

    let mut refuel = vec![0.0; budget.len()];
    let mut target_fuel = 0.0;
    for (j, leg) in budget.legs.iter().enumerate() {
        let m_t = params.target_initial_mass;
        let after_out = m_t + params.refuel_for(j);
        let before_out = rocket_mass_before(after_out, leg.dv_target_out, isp_t, g0);
        // inbound burn run forwards: m_t is the mass before it
        let after_in = m_t / rocket_mass_before(1.0, leg.dv_target_in, isp_t, g0);
        let m_r = before_out - after_in;
        if m_r < 0.0 {
            return Err(Error::NegativeRefuel {
                leg: j + 1,
                mass_kg: m_r,
            });
        }
        refuel[j] = m_r;
        target_fuel += (m_t - after_in) + (before_out - after_out);
    }

    let mut mass = params.servicer_final_mass;
    let mut servicer_fuel = 0.0;
    let before_return = rocket_mass_before(mass, budget.dv_servicer_return, isp_s, g0);
    servicer_fuel += before_return - mass;
    mass = before_return;
    for (leg, m_r) in budget.legs.iter().zip(&refuel).rev() {
        mass += m_r;
        let before = rocket_mass_before(mass, leg.dv_servicer, isp_s, g0);
        servicer_fuel += before - mass;
        mass = before;
    }

    Ok(CampaignResult {
        servicer_initial_mass: mass,
        variable_fuel_mass: servicer_fuel + target_fuel,
        servicer_fuel_consumed: servicer_fuel,
        target_fuel_consumed: target_fuel,
        per_leg_refuel_mass: refuel,
    })
}

/// Plan, budget and closed-form result for one architecture.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub plan: RendezvousPlan,
    pub budget: CampaignBudget,
    pub result: CampaignResult,
}

pub fn evaluate_plan(
    c: &Constellation,
    plan: &RendezvousPlan,
    params: &MissionParams,
) -> Result<Evaluation> {
    check_count(c, params)?;
    let budget = build_budget(c, plan)?;
    let result = servicer_initial_mass_cooperative(&budget, params)?;
    Ok(Evaluation {
        plan: plan.clone(),
        budget,
        result,
    })
}

pub fn evaluate_architecture(
    c: &Constellation,
    arch: &ArchitectureId,
    params: &MissionParams,
) -> Result<CampaignResult> {
    let plan = plan_for_architecture(c, arch);
    evaluate_plan(c, &plan, params).map(|e| e.result)
}

fn check_count(c: &Constellation, params: &MissionParams) -> Result<()> {
    if params.target_count != c.len() {
        return Err(Error::InvalidInput(format!(
            "mission expects {} targets but the constellation has {}",
            params.target_count,
            c.len()
        )));
    }
    Ok(())
}

/// Inclination layouts for twelve targets in four groups of three [deg].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TargetSet {
    A,
    B,
    C,
    D,
    E,
}

impl TargetSet {
    pub const ALL: [TargetSet; 5] = [
        TargetSet::A,
        TargetSet::B,
        TargetSet::C,
        TargetSet::D,
        TargetSet::E,
    ];

    pub fn group_inclinations_deg(self) -> [f64; 4] {
        match self {
            TargetSet::A => [53.0, 53.2, 70.0, 97.6],
            TargetSet::B => [53.0, 53.0, 53.0, 53.0],
            TargetSet::C => [53.0, 53.2, 53.2, 53.2],
            TargetSet::D => [53.0, 70.0, 70.0, 70.0],
            TargetSet::E => [53.0, 53.2, 70.0, 75.0],
        }
    }

    /// Inclination of target `index` (0-based) [deg].
    pub fn inclination_deg(self, index: usize) -> f64 {
        self.group_inclinations_deg()[(index / 3).min(3)]
    }

    pub fn label(self) -> &'static str {
        match self {
            TargetSet::A => "a",
            TargetSet::B => "b",
            TargetSet::C => "c",
            TargetSet::D => "d",
            TargetSet::E => "e",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "a" => Some(TargetSet::A),
            "b" => Some(TargetSet::B),
            "c" => Some(TargetSet::C),
            "d" => Some(TargetSet::D),
            "e" => Some(TargetSet::E),
            _ => None,
        }
    }

    /// Re-assigns target inclinations, keeping every argument of latitude.
    pub fn apply(self, c: &Constellation) -> Constellation {
        let targets = c
            .targets
            .iter()
            .enumerate()
            .map(|(j, t)| t.with_slot(self.inclination_deg(j).to_radians(), t.arg_latitude))
            .collect();
        Constellation {
            targets,
            ..c.clone()
        }
    }
}
