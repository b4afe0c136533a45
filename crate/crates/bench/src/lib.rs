//! Fixtures shared by the benchmarks in `benches/`.

use refuel_core::{CircularOrbit, Constellation, GravityModel, PhasingPolicy, TargetSet};

/// Twelve targets 30 deg apart on the 550 km shell, servicer at (53 deg, 0).
pub fn twelve_targets(set: TargetSet) -> Constellation {
    let servicer = CircularOrbit::from_degrees(550.0, 53.0, 0.0).unwrap();
    let targets = (0..12)
        .map(|j| {
            CircularOrbit::from_degrees(550.0, set.inclination_deg(j), 345.0 - 30.0 * j as f64)
                .unwrap()
        })
        .collect();
    Constellation::new(
        servicer,
        targets,
        GravityModel::default(),
        PhasingPolicy::default(),
    )
    .unwrap()
}
