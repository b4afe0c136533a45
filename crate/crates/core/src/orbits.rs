//! Impulsive maneuver costs between circular orbits of a single shell.
//!
//! Every transfer is split into a pure plane change at the shared node
//! followed by a coplanar phasing maneuver. Angles are radians, distances
//! kilometres and speeds km/s.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Earth gravitational parameter [km^3/s^2].
pub const MU_EARTH: f64 = 398_600.441_8;
/// Earth equatorial radius [km].
pub const EARTH_RADIUS_KM: f64 = 6_378.137;
/// Standard gravity [m/s^2].
pub const G0: f64 = 9.80665;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GravityModel {
    /// Gravitational parameter [km^3/s^2].
    pub mu: f64,
    /// Equatorial radius [km].
    pub earth_radius: f64,
}

impl Default for GravityModel {
    fn default() -> Self {
        Self {
            mu: MU_EARTH,
            earth_radius: EARTH_RADIUS_KM,
        }
    }
}

impl GravityModel {
    pub fn new(mu: f64, earth_radius: f64) -> Result<Self> {
        let g = Self { mu, earth_radius };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mu.is_finite() && self.mu > 0.0) {
            return Err(Error::InvalidInput(format!(
                "mu must be > 0, got {}",
                self.mu
            )));
        }
        if !(self.earth_radius.is_finite() && self.earth_radius > 0.0) {
            return Err(Error::InvalidInput(format!(
                "earth_radius must be > 0, got {}",
                self.earth_radius
            )));
        }
        Ok(())
    }
}

/// A spacecraft slot on a circular orbit.
///
/// `arg_latitude` is measured relative to a reference shared by every
/// spacecraft in the campaign, so differences between two orbits are
/// meaningful phase gaps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircularOrbit {
    /// Altitude above `earth_radius` [km].
    pub altitude: f64,
    /// Inclination [rad], in `[0, pi]`.
    pub inclination: f64,
    /// Argument of latitude [rad], in `[0, 2pi)`.
    pub arg_latitude: f64,
}

impl CircularOrbit {
    /// Builds a validated orbit. The argument of latitude is wrapped into `[0, 2pi)`.
    pub fn new(altitude: f64, inclination: f64, arg_latitude: f64) -> Result<Self> {
        let orbit = Self {
            altitude,
            inclination,
            arg_latitude: wrap_angle(arg_latitude),
        };
        orbit.validate()?;
        Ok(orbit)
    }

    pub fn from_degrees(
        altitude: f64,
        inclination_deg: f64,
        arg_latitude_deg: f64,
    ) -> Result<Self> {
        Self::new(
            altitude,
            inclination_deg.to_radians(),
            arg_latitude_deg.to_radians(),
        )
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.altitude.is_finite() && self.altitude > 0.0) {
            return Err(Error::InvalidInput(format!(
                "altitude must be > 0 km, got {}",
                self.altitude
            )));
        }
        if !(self.inclination.is_finite() && (0.0..=PI).contains(&self.inclination)) {
            return Err(Error::InvalidInput(format!(
                "inclination must lie in [0, 180] deg, got {} deg",
                self.inclination.to_degrees()
            )));
        }
        if !(self.arg_latitude.is_finite() && (0.0..TAU).contains(&self.arg_latitude)) {
            return Err(Error::InvalidInput(format!(
                "argument of latitude must lie in [0, 360) deg, got {} deg",
                self.arg_latitude.to_degrees()
            )));
        }
        Ok(())
    }

    /// Orbit radius [km].
    pub fn radius(&self, g: &GravityModel) -> f64 {
        g.earth_radius + self.altitude
    }

    /// Same shell, different slot.
    pub fn with_slot(&self, inclination: f64, arg_latitude: f64) -> Self {
        Self {
            altitude: self.altitude,
            inclination,
            arg_latitude: wrap_angle(arg_latitude),
        }
    }
}

/// Revolution counts for a phasing maneuver: the chasing craft flies `k1`
/// revolutions on the phasing orbit while the chased slot completes `k2`
/// revolutions plus the phase angle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PhasingPolicy {
    pub k1: u32,
    pub k2: u32,
}

impl Default for PhasingPolicy {
    fn default() -> Self {
        Self { k1: 1, k2: 1 }
    }
}

impl PhasingPolicy {
    pub fn new(k1: u32, k2: u32) -> Result<Self> {
        let p = Self { k1, k2 };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k1 < 1 {
            return Err(Error::InvalidPolicy {
                k1: self.k1,
                k2: self.k2,
            });
        }
        Ok(())
    }
}

/// Wraps an angle into `[0, 2pi)`.
pub fn wrap_angle(angle: f64) -> f64 {
    let w = angle.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if w >= TAU {
        0.0
    } else {
        w
    }
}

/// Circular speed `sqrt(mu / r)` [km/s].
pub fn circular_velocity(orbit: &CircularOrbit, g: &GravityModel) -> f64 {
    (g.mu / orbit.radius(g)).sqrt()
}

/// Plane-change cost `2 v sin(delta_i / 2)` for an absolute inclination change.
pub fn delta_v_inclination(v: f64, delta_i: f64) -> Result<f64> {
    if !(delta_i.is_finite() && (0.0..=PI).contains(&delta_i)) {
        return Err(Error::InvalidInput(format!(
            "plane change must lie in [0, pi] rad, got {delta_i}"
        )));
    }
    Ok(2.0 * v * (0.5 * delta_i).sin())
}

/// Semi-major axis of the phasing orbit [km] for a gap `delta_u` measured
/// from the chaser.
pub fn phasing_semi_major_axis(radius: f64, delta_u: f64, policy: &PhasingPolicy) -> f64 {
    let phase_angle = TAU - delta_u;
    let ratio = (phase_angle + TAU * f64::from(policy.k2)) / (TAU * f64::from(policy.k1));
    ratio.powf(2.0 / 3.0) * radius
}

/// Two-burn coplanar phasing cost [km/s].
///
/// `delta_u == 0` means the chaser already sits on the slot and costs
/// nothing. Otherwise the chaser enters a tangent ellipse whose period closes
/// the gap after `k1` revolutions and circularises back.
pub fn delta_v_phasing(
    orbit: &CircularOrbit,
    delta_u: f64,
    policy: &PhasingPolicy,
    g: &GravityModel,
) -> Result<f64> {
    policy.validate()?;
    if !(delta_u.is_finite() && (0.0..TAU).contains(&delta_u)) {
        return Err(Error::InvalidInput(format!(
            "phase gap must lie in [0, 2pi) rad, got {delta_u}"
        )));
    }
    if delta_u == 0.0 {
        return Ok(0.0);
    }
    let r = orbit.radius(g);
    let a = phasing_semi_major_axis(r, delta_u, policy);
    let perigee = r.min(2.0 * a - r);
    if perigee <= g.earth_radius {
        return Err(Error::PerigeeBelowSurface {
            perigee_radius_km: perigee,
            earth_radius_km: g.earth_radius,
        });
    }
    let v_circ = (g.mu / r).sqrt();
    let v_tangent = (g.mu * (2.0 / r - 1.0 / a)).sqrt();
    Ok(2.0 * (v_circ - v_tangent).abs())
}

/// Phase gap a maneuvering craft has to close when moving from `from_u` to
/// `to_u`. With `chaser_is_self` the mover trails the destination slot;
/// otherwise the gap is measured from the destination side.
pub fn phase_gap(from_u: f64, to_u: f64, chaser_is_self: bool) -> f64 {
    if chaser_is_self {
        wrap_angle(to_u - from_u)
    } else {
        wrap_angle(from_u - to_u)
    }
}

/// Plane change followed by phasing, from `from` to the slot
/// `(to_inclination, to_arg_latitude)` on the same shell.
pub fn transfer_delta_v(
    from: &CircularOrbit,
    to_inclination: f64,
    to_arg_latitude: f64,
    chaser_is_self: bool,
    policy: &PhasingPolicy,
    g: &GravityModel,
) -> Result<f64> {
    let v = circular_velocity(from, g);
    let plane = delta_v_inclination(v, (to_inclination - from.inclination).abs())?;
    let gap = phase_gap(from.arg_latitude, to_arg_latitude, chaser_is_self);
    let phasing = delta_v_phasing(from, gap, policy, g)?;
    Ok(plane + phasing)
}
