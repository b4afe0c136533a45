use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid phasing policy: k1 = {k1} (must be >= 1)")]
    InvalidPolicy { k1: u32, k2: u32 },

    #[error(
        "phasing orbit perigee {perigee_radius_km:.3} km is at or below the surface radius {earth_radius_km:.3} km"
    )]
    PerigeeBelowSurface {
        perigee_radius_km: f64,
        earth_radius_km: f64,
    },

    /// A transfer failed while building leg `leg` (1-based; `n + 1` is the return leg).
    #[error("leg {leg}: {source}")]
    Leg {
        leg: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("refuel mass for leg {leg} evaluated negative ({mass_kg} kg)")]
    NegativeRefuel { leg: usize, mass_kg: f64 },

    #[error("leg {leg} carries target delta-v in a non-cooperative budget")]
    CooperativeLegInNonCooperativeBudget { leg: usize },

    #[error("budget has {got} legs but the mission has {expected} targets")]
    BudgetLength { expected: usize, got: usize },

    #[error(
        "servicer delta-v totals are identical in both architectures; no crossover ratio exists"
    )]
    NoCrossover,

    #[error("fully cooperative budget has non-zero servicer delta-v on leg {leg}")]
    ServicerNotPassive { leg: usize },

    #[error("critical mass ratio requires a uniform refuel amount per target")]
    NonUniformRefuel,

    #[error("infeasible optimizer bounds: {0}")]
    InfeasibleBounds(String),
}

impl Error {
    pub(crate) fn at_leg(self, leg: usize) -> Self {
        Error::Leg {
            leg,
            source: Box::new(self),
        }
    }

    /// Strips any leg annotations and returns the underlying cause.
    pub fn root(&self) -> &Error {
        match self {
            Error::Leg { source, .. } => source.root(),
            other => other,
        }
    }
}
