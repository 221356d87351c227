//! Analytics for the M/D/∞ queue: Poisson arrivals at rate `λ`, every
//! customer served for exactly `a` time units, unlimited servers.
//!
//! The busy period `B` starts with an arrival to an empty system and ends
//! when the system next empties. It has an atom of mass `e^{-ρ}` at `a`
//! (no further arrival during the first service). The busy cycle is
//! `Z = I + B` with an independent exponential idle period `I`.

mod bounds;
mod moments;
mod series;
mod table;
mod transforms;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use bounds::{atom_bound, chebyshev_bound, truncation_window, ChebyshevBound, Window};
pub use moments::{
    busy_cycle_moment_from_busy_period, busy_cycle_moments, busy_period_moment_recursion,
    busy_period_moments, recursion_coefficient, MomentSet, MAX_RECURSION_ORDER,
};
pub use series::{series_cdf, SeriesCdf, SeriesValue, DEFAULT_GRID_CELLS, DEFAULT_TAIL_EPSILON};
pub use table::{
    compute_table, moments_from_table, DistributionTable, TableMoments, TableRequest, TableRow,
};
pub use transforms::{
    busy_cycle_transform, busy_period_transform, idle_transform, BusyCycleTransform,
    BusyPeriodTransform, IdleTransform,
};

/// Arrival rate and deterministic service time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QueueParams {
    lambda: f64,
    a: f64,
    rho: f64,
}

impl QueueParams {
    pub fn new(lambda: f64, a: f64) -> Result<Self> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::InvalidParameter {
                name: "lambda",
                value: lambda,
                expected: "must be finite and > 0",
            });
        }
        if !(a.is_finite() && a >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "service",
                value: a,
                expected: "must be finite and >= 0",
            });
        }
        Ok(Self {
            lambda,
            a,
            rho: lambda * a,
        })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Service time.
    pub fn a(&self) -> f64 {
        self.a
    }

    /// Traffic intensity `λa`.
    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// `e^{-ρ}`, the probability that the busy period lasts exactly `a`.
    pub fn atom_mass(&self) -> f64 {
        (-self.rho).exp()
    }
}

/// Which random variable a computation targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Target {
    BusyPeriod,
    BusyCycle,
}

impl Target {
    pub fn as_str(&self) -> &'static str {
        match self {
            Target::BusyPeriod => "busy-period",
            Target::BusyCycle => "busy-cycle",
        }
    }
}

impl std::fmt::Display for Target {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rho_is_exact_product() {
        let p = QueueParams::new(1.7, 0.3).unwrap();
        assert_eq!(p.rho(), 1.7 * 0.3);
    }

    #[test]
    fn rejects_bad_params() {
        assert!(QueueParams::new(0.0, 1.0).is_err());
        assert!(QueueParams::new(1.0, -0.1).is_err());
        assert!(QueueParams::new(f64::NAN, 1.0).is_err());
        assert!(QueueParams::new(1.0, 0.0).is_ok());
    }
}
