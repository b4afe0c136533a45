//! Mass budgets for refueling a set of satellites from one servicer, with
//! and without the targets helping out.
//!
//! [`campaign`] turns a constellation and a rendezvous plan into per-leg
//! delta-v budgets, [`massmodel`] turns budgets into masses, and
//! [`optimizer`] searches for rendezvous plans that beat the fixed
//! architectures.

pub mod campaign;
pub mod error;
pub mod massmodel;
pub mod optimizer;
pub mod orbits;

pub use campaign::{
    build_budget, evaluate_architecture, evaluate_plan, plan_for_architecture, simulate_masses,
    ArchitectureId, Constellation, Evaluation, RendezvousPlan, RendezvousPoint, TargetSet,
};
pub use error::{Error, Result};
pub use massmodel::{
    critical_mass_ratio, critical_mass_ratio_a_d, servicer_initial_mass_cooperative,
    servicer_initial_mass_noncooperative, CampaignBudget, CampaignResult, LegBudget, MissionParams,
};
pub use optimizer::{optimize_plan, OptimizationReport, OptimizerConfig};
pub use orbits::{CircularOrbit, GravityModel, PhasingPolicy};
