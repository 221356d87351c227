use serde::{Deserialize, Serialize};

use super::{busy_cycle_moments, QueueParams, Target};
use crate::error::{Error, Result};

/// One-sided Chebyshev lower bound on a CDF.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChebyshevBound {
    /// Bound value; may be negative (vacuous), `-inf` at the pole.
    pub value: f64,
    /// True when `t` lies where the bound is guaranteed to hold:
    /// `t > μ + max(μ, σ)`.
    pub valid: bool,
    /// True when `t` equals the mean exactly.
    pub pole: bool,
}

impl ChebyshevBound {
    /// `1 - σ²/(t - μ)²` for a nonnegative variable with mean `μ` and
    /// variance `σ²`.
    pub fn from_moments(mean: f64, variance: f64, t: f64) -> Self {
        let gap = t - mean;
        let valid = t > mean + mean.max(variance.sqrt());
        if gap == 0.0 {
            return Self {
                value: f64::NEG_INFINITY,
                valid,
                pole: true,
            };
        }
        Self {
            value: 1.0 - variance / (gap * gap),
            valid,
            pole: false,
        }
    }
}

fn check_time(t: f64) -> Result<()> {
    if t.is_finite() && t >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "t",
            value: t,
            expected: "must be finite and >= 0",
        })
    }
}

/// `1 - (e^{2ρ} - 2ρe^ρ - 1)/(1 + λt - e^ρ)²`, a lower bound on the
/// busy-period CDF for `t > λ⁻¹[e^ρ - 1 + max(e^ρ - 1, sqrt(e^{2ρ} - 2ρe^ρ - 1))]`.
pub fn chebyshev_bound(params: &QueueParams, t: f64) -> Result<ChebyshevBound> {
    check_time(t)?;
    let (lambda, rho) = (params.lambda(), params.rho());
    let e_rho = rho.exp();
    let numerator = (2.0 * rho).exp() - 2.0 * rho * e_rho - 1.0;
    let gap = 1.0 + lambda * t - e_rho;
    let threshold = (e_rho - 1.0 + (e_rho - 1.0).max(numerator.max(0.0).sqrt())) / lambda;
    let valid = t > threshold;
    if gap == 0.0 {
        return Ok(ChebyshevBound {
            value: f64::NEG_INFINITY,
            valid,
            pole: true,
        });
    }
    Ok(ChebyshevBound {
        value: 1.0 - numerator / (gap * gap),
        valid,
        pole: false,
    })
}

/// `0` before the service time, `e^{-ρ}` from it on.
pub fn atom_bound(params: &QueueParams, t: f64) -> f64 {
    if t < params.a() {
        0.0
    } else {
        params.atom_mass()
    }
}

/// Support window `[L, U]` outside which the target carries mass below
/// `Δp·10^{-l}` by Chebyshev's inequality.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub lower: f64,
    pub upper: f64,
}

pub fn truncation_window(
    params: &QueueParams,
    delta_p: f64,
    l: u32,
    target: Target,
) -> Result<Window> {
    if !(delta_p > 0.0 && delta_p < 0.5) {
        return Err(Error::InvalidDeltaP(delta_p));
    }
    if l == 0 {
        return Err(Error::InvalidParameter {
            name: "l",
            value: 0.0,
            expected: "must be >= 1",
        });
    }
    let scale = 10f64.powi(l as i32) / delta_p;
    let upper = match target {
        Target::BusyPeriod => {
            let (lambda, rho) = (params.lambda(), params.rho());
            let numerator = (2.0 * rho).exp() - 2.0 * rho * rho.exp() - 1.0;
            if !(numerator > 0.0) {
                return Err(Error::InvalidParameter {
                    name: "service",
                    value: params.a(),
                    expected: "must be > 0 (the busy-period variance vanishes)",
                });
            }
            (rho.exp_m1() + (numerator * scale).sqrt()) / lambda
        }
        Target::BusyCycle => {
            let m = busy_cycle_moments(params);
            m.mean + (m.variance * scale).sqrt()
        }
    };
    Ok(Window {
        lower: params.a(),
        upper,
    })
}

/// Chebyshev bound for either target, from its closed-form moments.
pub(crate) fn target_chebyshev(params: &QueueParams, target: Target, t: f64) -> Result<ChebyshevBound> {
    match target {
        Target::BusyPeriod => chebyshev_bound(params, t),
        Target::BusyCycle => {
            check_time(t)?;
            let m = busy_cycle_moments(params);
            Ok(ChebyshevBound::from_moments(m.mean, m.variance, t))
        }
    }
}
