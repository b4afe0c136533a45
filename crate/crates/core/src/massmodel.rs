//! Closed-form mass budgets for a single servicer refueling `n` targets.
//!
//! Delta-v values are carried in km/s everywhere; [`growth`] is the only
//! place they meet `I_sp * g0`, so the km/s to m/s conversion happens there.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::orbits::G0;

/// Mass growth factor `exp(dv / (isp * g0))` for a burn of `dv_km_s`.
#[inline]
pub fn growth(dv_km_s: f64, isp: f64, g0: f64) -> f64 {
    exponent(dv_km_s, isp, g0).exp()
}

#[inline]
fn exponent(dv_km_s: f64, isp: f64, g0: f64) -> f64 {
    dv_km_s * 1000.0 / (isp * g0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MissionParams {
    pub target_count: usize,
    /// Servicer mass after the return transfer (dry mass) [kg].
    pub servicer_final_mass: f64,
    /// Target mass when refueling is requested [kg].
    pub target_initial_mass: f64,
    /// Usable fuel each target needs after all its transfers [kg].
    pub required_refuel: f64,
    /// Optional per-target override of `required_refuel`, in visit order.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub refuel_schedule: Option<Vec<f64>>,
    /// Servicer specific impulse [s].
    pub isp_servicer: f64,
    /// Target specific impulse [s].
    pub isp_target: f64,
    /// Standard gravity [m/s^2].
    pub g0: f64,
}

impl MissionParams {
    /// Case-study defaults: 1000 kg targets needing 200 kg each, 300 s on both sides.
    pub fn reference(target_count: usize, servicer_final_mass: f64) -> Self {
        Self {
            target_count,
            servicer_final_mass,
            target_initial_mass: 1000.0,
            required_refuel: 200.0,
            refuel_schedule: None,
            isp_servicer: 300.0,
            isp_target: 300.0,
            g0: G0,
        }
    }

    /// Copy with `servicer_final_mass = ratio * target_initial_mass`.
    pub fn with_mass_ratio(&self, ratio: f64) -> Self {
        Self {
            servicer_final_mass: ratio * self.target_initial_mass,
            ..self.clone()
        }
    }

    pub fn mass_ratio(&self) -> f64 {
        self.servicer_final_mass / self.target_initial_mass
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidInput(format!("{name} must be > 0, got {v}")))
            }
        };
        if self.target_count < 1 {
            return Err(Error::InvalidInput("target count must be >= 1".into()));
        }
        positive("servicer final mass", self.servicer_final_mass)?;
        positive("target initial mass", self.target_initial_mass)?;
        positive("servicer Isp", self.isp_servicer)?;
        positive("target Isp", self.isp_target)?;
        positive("g0", self.g0)?;
        if !(self.required_refuel.is_finite() && self.required_refuel >= 0.0) {
            return Err(Error::InvalidInput(format!(
                "required refuel must be >= 0, got {}",
                self.required_refuel
            )));
        }
        if let Some(schedule) = &self.refuel_schedule {
            if schedule.len() != self.target_count {
                return Err(Error::InvalidInput(format!(
                    "refuel schedule has {} entries for {} targets",
                    schedule.len(),
                    self.target_count
                )));
            }
            if let Some(bad) = schedule.iter().find(|m| !(m.is_finite() && **m >= 0.0)) {
                return Err(Error::InvalidInput(format!(
                    "refuel schedule entries must be >= 0, got {bad}"
                )));
            }
        }
        Ok(())
    }

    /// Required refuel for the target visited on leg `index` (0-based).
    pub fn refuel_for(&self, index: usize) -> f64 {
        self.refuel_schedule
            .as_ref()
            .and_then(|s| s.get(index).copied())
            .unwrap_or(self.required_refuel)
    }

    fn uniform_refuel(&self) -> Result<f64> {
        match &self.refuel_schedule {
            Some(s) if s.iter().any(|m| *m != s[0]) => Err(Error::NonUniformRefuel),
            Some(s) => Ok(s[0]),
            None => Ok(self.required_refuel),
        }
    }

    /// Copy restricted to the first `n` targets.
    pub fn truncated(&self, n: usize) -> Self {
        Self {
            target_count: n,
            refuel_schedule: self
                .refuel_schedule
                .as_ref()
                .map(|s| s.iter().take(n).copied().collect()),
            ..self.clone()
        }
    }
}

/// Delta-v for one refueling leg [km/s].
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct LegBudget {
    /// Servicer transfer to the rendezvous point.
    pub dv_servicer: f64,
    /// Target transfer from its slot to the rendezvous point.
    pub dv_target_in: f64,
    /// Target transfer back to its unperturbed slot.
    pub dv_target_out: f64,
}

impl LegBudget {
    pub fn servicer_only(dv: f64) -> Self {
        Self {
            dv_servicer: dv,
            ..Self::default()
        }
    }

    fn validate(&self, leg: usize) -> Result<()> {
        let ok = |v: f64| v.is_finite() && v >= 0.0;
        if ok(self.dv_servicer) && ok(self.dv_target_in) && ok(self.dv_target_out) {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!(
                "leg {leg}: delta-v components must be finite and >= 0, got {self:?}"
            )))
        }
    }
}

/// Ordered legs plus the servicer's final transfer home.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CampaignBudget {
    pub legs: Vec<LegBudget>,
    /// Servicer return transfer after the last refuel [km/s].
    pub dv_servicer_return: f64,
}

impl CampaignBudget {
    pub fn new(legs: Vec<LegBudget>, dv_servicer_return: f64) -> Self {
        Self {
            legs,
            dv_servicer_return,
        }
    }

    pub fn len(&self) -> usize {
        self.legs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.legs.is_empty()
    }

    /// Sum of every servicer transfer including the return [km/s].
    pub fn total_servicer_dv(&self) -> f64 {
        self.legs.iter().map(|l| l.dv_servicer).sum::<f64>() + self.dv_servicer_return
    }

    pub fn total_target_dv(&self) -> f64 {
        self.legs
            .iter()
            .map(|l| l.dv_target_in + l.dv_target_out)
            .sum()
    }

    pub fn validate(&self, params: &MissionParams) -> Result<()> {
        if self.legs.len() != params.target_count {
            return Err(Error::BudgetLength {
                expected: params.target_count,
                got: self.legs.len(),
            });
        }
        for (j, leg) in self.legs.iter().enumerate() {
            leg.validate(j + 1)?;
        }
        if !(self.dv_servicer_return.is_finite() && self.dv_servicer_return >= 0.0) {
            return Err(Error::InvalidInput(format!(
                "return delta-v must be finite and >= 0, got {}",
                self.dv_servicer_return
            )));
        }
        Ok(())
    }

    fn require_servicer_only(&self) -> Result<()> {
        match self
            .legs
            .iter()
            .position(|l| l.dv_target_in != 0.0 || l.dv_target_out != 0.0)
        {
            Some(j) => Err(Error::CooperativeLegInNonCooperativeBudget { leg: j + 1 }),
            None => Ok(()),
        }
    }

    /// Running servicer delta-v through each leg, excluding the return [km/s].
    fn cumulative_servicer_dv(&self) -> impl Iterator<Item = f64> + '_ {
        self.legs.iter().scan(0.0, |acc, l| {
            *acc += l.dv_servicer;
            Some(*acc)
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignResult {
    /// Servicer wet mass at campaign start [kg].
    pub servicer_initial_mass: f64,
    /// Servicer plus target fuel burned on transfers [kg].
    pub variable_fuel_mass: f64,
    pub servicer_fuel_consumed: f64,
    pub target_fuel_consumed: f64,
    /// Fuel handed to each target, in delivery order [kg].
    pub per_leg_refuel_mass: Vec<f64>,
}

/// Mass before a burn that leaves `mass_after` [kg].
pub fn rocket_mass_before(mass_after: f64, dv: f64, isp: f64, g0: f64) -> f64 {
    mass_after * growth(dv, isp, g0)
}

/// Fuel the servicer hands over on a cooperative leg: enough for the target
/// to cover its return transfer and still end with `required_refuel` usable.
pub fn cooperative_refuel_mass(leg: &LegBudget, params: &MissionParams) -> Result<f64> {
    refuel_mass_for(leg, params, 0)
}

fn refuel_mass_for(leg: &LegBudget, params: &MissionParams, index: usize) -> Result<f64> {
    let m_t = params.target_initial_mass;
    let m_req = params.refuel_for(index);
    let out = growth(leg.dv_target_out, params.isp_target, params.g0);
    let inbound_left = (-exponent(leg.dv_target_in, params.isp_target, params.g0)).exp();
    let m_r = (m_t + m_req) * out - m_t * inbound_left;
    if m_r < 0.0 || !m_r.is_finite() {
        return Err(Error::NegativeRefuel {
            leg: index + 1,
            mass_kg: m_r,
        });
    }
    Ok(m_r)
}

/// Closed-form wet mass when each target's refuel mass is known.
fn closed_form(
    budget: &CampaignBudget,
    params: &MissionParams,
    refuel: Vec<f64>,
) -> CampaignResult {
    let (isp, g0) = (params.isp_servicer, params.g0);
    let total = exponent(budget.total_servicer_dv(), isp, g0);

    let mut initial = params.servicer_final_mass * total.exp();
    // fuel burned by the servicer = every carried mass times (growth - 1)
    let mut servicer_fuel = params.servicer_final_mass * total.exp_m1();
    for (m_r, cum) in refuel.iter().zip(budget.cumulative_servicer_dv()) {
        let e = exponent(cum, isp, g0);
        initial += m_r * e.exp();
        servicer_fuel += m_r * e.exp_m1();
    }

    let target_fuel: f64 = refuel
        .iter()
        .enumerate()
        .map(|(j, m_r)| (m_r - params.refuel_for(j)).max(0.0))
        .sum();

    CampaignResult {
        servicer_initial_mass: initial,
        variable_fuel_mass: servicer_fuel + target_fuel,
        servicer_fuel_consumed: servicer_fuel,
        target_fuel_consumed: target_fuel,
        per_leg_refuel_mass: refuel,
    }
}

/// Servicer wet mass when targets may maneuver to meet it.
pub fn servicer_initial_mass_cooperative(
    budget: &CampaignBudget,
    params: &MissionParams,
) -> Result<CampaignResult> {
    params.validate()?;
    budget.validate(params)?;
    let refuel = budget
        .legs
        .iter()
        .enumerate()
        .map(|(j, leg)| refuel_mass_for(leg, params, j))
        .collect::<Result<Vec<_>>>()?;
    Ok(closed_form(budget, params, refuel))
}

/// Servicer wet mass when only the servicer maneuvers.
pub fn servicer_initial_mass_noncooperative(
    budget: &CampaignBudget,
    params: &MissionParams,
) -> Result<CampaignResult> {
    params.validate()?;
    budget.validate(params)?;
    budget.require_servicer_only()?;
    let refuel = (0..params.target_count)
        .map(|j| params.refuel_for(j))
        .collect();
    Ok(closed_form(budget, params, refuel))
}

/// Servicer-to-target mass ratio `m_s,F / m_t,I` at which the cooperative
/// and non-cooperative budgets need the same servicer wet mass.
///
/// Returns [`Error::NoCrossover`] when both budgets have the same servicer
/// delta-v total, since the wet-mass difference then does not depend on the
/// servicer mass.
pub fn critical_mass_ratio(
    budget_coop: &CampaignBudget,
    budget_noncoop: &CampaignBudget,
    params: &MissionParams,
) -> Result<f64> {
    params.validate()?;
    budget_coop.validate(params)?;
    budget_noncoop.validate(params)?;
    budget_noncoop.require_servicer_only()?;
    let m_req = params.uniform_refuel()?;
    let ratio = m_req / params.target_initial_mass;
    let (isp_s, isp_t, g0) = (params.isp_servicer, params.isp_target, params.g0);

    let numerator: f64 = budget_coop
        .legs
        .iter()
        .zip(budget_coop.cumulative_servicer_dv())
        .zip(budget_noncoop.cumulative_servicer_dv())
        .map(|((leg, cum_c), cum_n)| {
            let target_term = (1.0 + ratio) * growth(leg.dv_target_out, isp_t, g0)
                - (-exponent(leg.dv_target_in, isp_t, g0)).exp();
            ratio * growth(cum_n, isp_s, g0) - target_term * growth(cum_c, isp_s, g0)
        })
        .sum();
    let denominator = growth(budget_coop.total_servicer_dv(), isp_s, g0)
        - growth(budget_noncoop.total_servicer_dv(), isp_s, g0);
    if denominator.abs() < 1e-15 {
        return Err(Error::NoCrossover);
    }
    Ok(numerator / denominator)
}

/// Critical ratio between the servicer-only architecture and a passive
/// servicer that never leaves its slot.
pub fn critical_mass_ratio_a_d(
    budget_noncoop: &CampaignBudget,
    budget_fully_coop: &CampaignBudget,
    params: &MissionParams,
) -> Result<f64> {
    params.validate()?;
    budget_noncoop.validate(params)?;
    budget_fully_coop.validate(params)?;
    budget_noncoop.require_servicer_only()?;
    if let Some(j) = budget_fully_coop
        .legs
        .iter()
        .position(|l| l.dv_servicer != 0.0)
    {
        return Err(Error::ServicerNotPassive { leg: j + 1 });
    }
    if budget_fully_coop.dv_servicer_return != 0.0 {
        return Err(Error::ServicerNotPassive {
            leg: params.target_count + 1,
        });
    }
    let m_req = params.uniform_refuel()?;
    let ratio = m_req / params.target_initial_mass;
    let (isp_s, isp_t, g0) = (params.isp_servicer, params.isp_target, params.g0);

    let numerator: f64 = budget_fully_coop
        .legs
        .iter()
        .zip(budget_noncoop.cumulative_servicer_dv())
        .map(|(leg, cum_n)| {
            ratio * growth(cum_n, isp_s, g0)
                - ((1.0 + ratio) * growth(leg.dv_target_out, isp_t, g0)
                    - (-exponent(leg.dv_target_in, isp_t, g0)).exp())
        })
        .sum();
    let denominator = 1.0 - growth(budget_noncoop.total_servicer_dv(), isp_s, g0);
    if denominator.abs() < 1e-15 {
        return Err(Error::NoCrossover);
    }
    Ok(numerator / denominator)
}
