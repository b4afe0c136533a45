//! JSON study files. Angles are degrees and masses kilograms in the file;
//! everything is converted to the core's radians on load.

use std::fs;
use std::path::{Path, PathBuf};

use refuel_core::orbits::{EARTH_RADIUS_KM, G0, MU_EARTH};
use refuel_core::{
    CircularOrbit, Constellation, GravityModel, MissionParams, OptimizerConfig, PhasingPolicy,
    TargetSet,
};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default)]
    pub gravity: GravitySection,
    pub constellation: ConstellationSection,
    #[serde(default)]
    pub mission: MissionSection,
    #[serde(default)]
    pub phasing: PhasingSection,
    #[serde(default)]
    pub optimizer: OptimizerSection,
    #[serde(default)]
    pub sweeps: SweepSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GravitySection {
    pub mu_km3_s2: f64,
    pub earth_radius_km: f64,
    pub g0_m_s2: f64,
}

impl Default for GravitySection {
    fn default() -> Self {
        Self {
            mu_km3_s2: MU_EARTH,
            earth_radius_km: EARTH_RADIUS_KM,
            g0_m_s2: G0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SlotDeg {
    pub inclination_deg: f64,
    pub arg_latitude_deg: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstellationSection {
    pub altitude_km: f64,
    pub servicer: SlotDeg,
    /// Visit order.
    #[serde(default)]
    pub targets: Vec<SlotDeg>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MissionSection {
    pub servicer_final_mass_kg: f64,
    pub target_initial_mass_kg: f64,
    pub required_refuel_kg: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub refuel_schedule_kg: Option<Vec<f64>>,
    pub isp_servicer_s: f64,
    pub isp_target_s: f64,
}

impl Default for MissionSection {
    fn default() -> Self {
        let p = MissionParams::reference(0, 1000.0);
        Self {
            servicer_final_mass_kg: p.servicer_final_mass,
            target_initial_mass_kg: p.target_initial_mass,
            required_refuel_kg: p.required_refuel,
            refuel_schedule_kg: None,
            isp_servicer_s: p.isp_servicer,
            isp_target_s: p.isp_target,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PhasingSection {
    pub k1: u32,
    pub k2: u32,
}

impl Default for PhasingSection {
    fn default() -> Self {
        let p = PhasingPolicy::default();
        Self { k1: p.k1, k2: p.k2 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OptimizerSection {
    /// Adds architecture E to `compare` and `sweep`.
    pub enabled: bool,
    pub num_starts: usize,
    pub rng_seed: u64,
    pub max_local_iterations: usize,
    pub convergence_tolerance_kg: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inclination_bounds_deg: Option<[f64; 2]>,
    pub initial_step_deg: f64,
}

impl Default for OptimizerSection {
    fn default() -> Self {
        let c = OptimizerConfig::default();
        Self {
            enabled: false,
            num_starts: c.num_starts,
            rng_seed: c.rng_seed,
            max_local_iterations: c.max_local_iterations,
            convergence_tolerance_kg: c.convergence_tolerance,
            inclination_bounds_deg: None,
            initial_step_deg: c.initial_step.to_degrees(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RatioRange {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Default for RatioRange {
    fn default() -> Self {
        Self {
            start: 0.5,
            stop: 6.0,
            step: 0.5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IspPair {
    pub isp_target_s: f64,
    pub isp_servicer_s: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepSection {
    pub mass_ratio: RatioRange,
    /// Inclusive `[first, last]` target counts; all targets when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_range: Option<[usize; 2]>,
    /// Mission values when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub isp_pairs: Option<Vec<IspPair>>,
    /// Letters `a` to `e` re-assigning target inclinations; the file's own
    /// inclinations when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target_sets: Option<Vec<String>>,
}

/// Validated sweep axes.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepAxes {
    pub mass_ratios: Vec<f64>,
    pub n_range: (usize, usize),
    /// `(target, servicer)` specific impulses [s].
    pub isp_pairs: Vec<(f64, f64)>,
    /// `None` keeps the configured inclinations.
    pub target_sets: Vec<Option<TargetSet>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StudyConfig {
    pub sweeps: SweepAxes,
    pub optimizer: OptimizerConfig,
    pub optimizer_enabled: bool,
}

/// Everything a command needs, already in core units.
#[derive(Debug, Clone, PartialEq)]
pub struct Study {
    pub constellation: Constellation,
    pub params: MissionParams,
    pub config: StudyConfig,
}

pub fn load_config(path: &Path) -> Result<Study, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::ConfigIo {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    parse_config(&text).map_err(|e| e.with_path(path))
}

pub fn parse_config(text: &str) -> Result<Study, CliError> {
    let file: ConfigFile = serde_json::from_str(text).map_err(|e| CliError::Parse {
        path: PathBuf::new(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    file.into_study()
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

fn core_invalid(field: &str, e: refuel_core::Error) -> CliError {
    CliError::Validation(format!("{field}: {e}"))
}

impl ConfigFile {
    pub fn into_study(self) -> Result<Study, CliError> {
        let g = &self.gravity;
        let gravity = GravityModel::new(g.mu_km3_s2, g.earth_radius_km)
            .map_err(|e| core_invalid("gravity", e))?;
        let phasing = PhasingPolicy::new(self.phasing.k1, self.phasing.k2)
            .map_err(|e| core_invalid("phasing", e))?;

        let cs = &self.constellation;
        if cs.targets.is_empty() {
            return Err(invalid(
                "constellation.targets must list at least one target",
            ));
        }
        let slot = |name: String, s: &SlotDeg| {
            CircularOrbit::from_degrees(cs.altitude_km, s.inclination_deg, s.arg_latitude_deg)
                .map_err(|e| core_invalid(&name, e))
        };
        let servicer = slot("constellation.servicer".into(), &cs.servicer)?;
        let targets = cs
            .targets
            .iter()
            .enumerate()
            .map(|(j, s)| slot(format!("constellation.targets[{j}]"), s))
            .collect::<Result<Vec<_>, _>>()?;
        let constellation = Constellation::new(servicer, targets, gravity, phasing)
            .map_err(|e| core_invalid("constellation", e))?;
        let n = constellation.len();

        let m = &self.mission;
        let params = MissionParams {
            target_count: n,
            servicer_final_mass: m.servicer_final_mass_kg,
            target_initial_mass: m.target_initial_mass_kg,
            required_refuel: m.required_refuel_kg,
            refuel_schedule: m.refuel_schedule_kg.clone(),
            isp_servicer: m.isp_servicer_s,
            isp_target: m.isp_target_s,
            g0: g.g0_m_s2,
        };
        params.validate().map_err(|e| core_invalid("mission", e))?;

        let o = &self.optimizer;
        let optimizer = OptimizerConfig {
            num_starts: o.num_starts,
            rng_seed: o.rng_seed,
            max_local_iterations: o.max_local_iterations,
            convergence_tolerance: o.convergence_tolerance_kg,
            bounds_inclination: o
                .inclination_bounds_deg
                .map(|[lo, hi]| (lo.to_radians(), hi.to_radians())),
            initial_step: o.initial_step_deg.to_radians(),
            ..OptimizerConfig::default()
        };
        optimizer
            .validate()
            .map_err(|e| core_invalid("optimizer", e))?;

        let sweeps = self.sweeps.resolve(n, &params)?;
        Ok(Study {
            constellation,
            params,
            config: StudyConfig {
                sweeps,
                optimizer,
                optimizer_enabled: o.enabled,
            },
        })
    }
}

impl SweepSection {
    fn resolve(&self, n: usize, params: &MissionParams) -> Result<SweepAxes, CliError> {
        let mass_ratios = ratio_values(&self.mass_ratio)?;
        let n_range = match self.n_range {
            None => (1, n),
            Some([a, b]) => check_n_range(a, b, n)?,
        };
        let isp_pairs = match &self.isp_pairs {
            None => vec![(params.isp_target, params.isp_servicer)],
            Some(v) if v.is_empty() => return Err(invalid("sweeps.isp_pairs is empty")),
            Some(v) => {
                for p in v {
                    if !(p.isp_target_s > 0.0 && p.isp_servicer_s > 0.0) {
                        return Err(invalid("sweeps.isp_pairs entries must be positive"));
                    }
                }
                v.iter()
                    .map(|p| (p.isp_target_s, p.isp_servicer_s))
                    .collect()
            }
        };
        let target_sets = match &self.target_sets {
            None => vec![None],
            Some(v) if v.is_empty() => return Err(invalid("sweeps.target_sets is empty")),
            Some(v) => v
                .iter()
                .map(|s| {
                    TargetSet::parse(s)
                        .map(Some)
                        .ok_or_else(|| invalid(format!("unknown target set {s:?}; use a to e")))
                })
                .collect::<Result<_, _>>()?,
        };
        Ok(SweepAxes {
            mass_ratios,
            n_range,
            isp_pairs,
            target_sets,
        })
    }
}

pub fn check_n_range(first: usize, last: usize, n: usize) -> Result<(usize, usize), CliError> {
    if first == 0 || first > last || last > n {
        return Err(invalid(format!(
            "target range {first}..{last} must satisfy 1 <= first <= last <= {n}"
        )));
    }
    Ok((first, last))
}

fn ratio_values(r: &RatioRange) -> Result<Vec<f64>, CliError> {
    if !(r.step.is_finite() && r.step > 0.0) {
        return Err(invalid("sweeps.mass_ratio.step must be positive"));
    }
    if !(r.start.is_finite() && r.stop.is_finite() && r.start > 0.0 && r.start <= r.stop) {
        return Err(invalid("sweeps.mass_ratio needs 0 < start <= stop"));
    }
    let count = ((r.stop - r.start) / r.step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|k| r.start + k as f64 * r.step).collect())
}

impl Study {
    /// Serializable form of this study; loading it back gives the same study.
    pub fn to_config_file(&self) -> ConfigFile {
        let c = &self.constellation;
        let deg = |o: &CircularOrbit| SlotDeg {
            inclination_deg: o.inclination.to_degrees(),
            arg_latitude_deg: o.arg_latitude.to_degrees(),
        };
        let p = &self.params;
        let o = &self.config.optimizer;
        let s = &self.config.sweeps;
        let ratios = &s.mass_ratios;
        let step = if ratios.len() > 1 {
            ratios[1] - ratios[0]
        } else {
            1.0
        };
        ConfigFile {
            gravity: GravitySection {
                mu_km3_s2: c.gravity.mu,
                earth_radius_km: c.gravity.earth_radius,
                g0_m_s2: p.g0,
            },
            constellation: ConstellationSection {
                altitude_km: c.servicer.altitude,
                servicer: deg(&c.servicer),
                targets: c.targets.iter().map(deg).collect(),
            },
            mission: MissionSection {
                servicer_final_mass_kg: p.servicer_final_mass,
                target_initial_mass_kg: p.target_initial_mass,
                required_refuel_kg: p.required_refuel,
                refuel_schedule_kg: p.refuel_schedule.clone(),
                isp_servicer_s: p.isp_servicer,
                isp_target_s: p.isp_target,
            },
            phasing: PhasingSection {
                k1: c.phasing.k1,
                k2: c.phasing.k2,
            },
            optimizer: OptimizerSection {
                enabled: self.config.optimizer_enabled,
                num_starts: o.num_starts,
                rng_seed: o.rng_seed,
                max_local_iterations: o.max_local_iterations,
                convergence_tolerance_kg: o.convergence_tolerance,
                inclination_bounds_deg: o
                    .bounds_inclination
                    .map(|(lo, hi)| [lo.to_degrees(), hi.to_degrees()]),
                initial_step_deg: o.initial_step.to_degrees(),
            },
            sweeps: SweepSection {
                mass_ratio: RatioRange {
                    start: ratios[0],
                    stop: ratios[ratios.len() - 1],
                    step,
                },
                n_range: Some([s.n_range.0, s.n_range.1]),
                isp_pairs: Some(
                    s.isp_pairs
                        .iter()
                        .map(|&(t, sv)| IspPair {
                            isp_target_s: t,
                            isp_servicer_s: sv,
                        })
                        .collect(),
                ),
                target_sets: s
                    .target_sets
                    .iter()
                    .map(|t| t.map(|t| t.label().to_string()))
                    .collect(),
            },
        }
    }
}
