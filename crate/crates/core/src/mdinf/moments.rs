use serde::{Deserialize, Serialize};

use super::QueueParams;
use crate::error::{Error, Result};
use crate::quad;

pub const MAX_RECURSION_ORDER: usize = 10;

const QUAD_REL_TOL: f64 = 1e-12;

/// Mean, variance and raw moments `E[X^n]` for `n = 1..=raw_moments.len()`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentSet {
    pub mean: f64,
    pub variance: f64,
    pub raw_moments: Vec<f64>,
}

impl MomentSet {
    fn from_mean_variance(mean: f64, variance: f64) -> Self {
        Self {
            mean,
            variance,
            raw_moments: vec![mean, variance + mean * mean],
        }
    }

    fn from_raw(raw_moments: Vec<f64>) -> Self {
        let mean = raw_moments[0];
        let variance = raw_moments.get(1).map_or(f64::NAN, |m2| m2 - mean * mean);
        Self {
            mean,
            variance,
            raw_moments,
        }
    }

    /// `E[X^n]`, with `E[X^0] = 1`.
    pub fn raw(&self, n: usize) -> Option<f64> {
        if n == 0 {
            Some(1.0)
        } else {
            self.raw_moments.get(n - 1).copied()
        }
    }
}

/// `E[B] = (e^ρ - 1)/λ`, `VAR[B] = (e^{2ρ} - 2ρe^ρ - 1)/λ²`.
pub fn busy_period_moments(params: &QueueParams) -> MomentSet {
    let (lambda, rho) = (params.lambda(), params.rho());
    let mean = rho.exp_m1() / lambda;
    let variance = ((2.0 * rho).exp_m1() - 2.0 * rho * rho.exp()) / (lambda * lambda);
    MomentSet::from_mean_variance(mean, variance)
}

/// `E[Z] = e^ρ/λ`, `VAR[Z] = (e^{2ρ} - 2ρe^ρ)/λ²`.
pub fn busy_cycle_moments(params: &QueueParams) -> MomentSet {
    let (lambda, rho) = (params.lambda(), params.rho());
    let mean = rho.exp() / lambda;
    let variance = ((2.0 * rho).exp() - 2.0 * rho * rho.exp()) / (lambda * lambda);
    MomentSet::from_mean_variance(mean, variance)
}

/// `C^(n)(0) = λ ∫_0^a (-t)^n e^{-λt} dt`, the deterministic-service form of
/// the coefficients feeding the busy-period moment recursion.
pub fn recursion_coefficient(params: &QueueParams, n: usize) -> Result<f64> {
    let lambda = params.lambda();
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    let integral = quad::integrate(
        |t: f64| t.powi(n as i32) * (-lambda * t).exp(),
        0.0,
        params.a(),
        QUAD_REL_TOL,
    )?;
    Ok(sign * lambda * integral)
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Raw busy-period moments from the recursion
///
/// ```text
/// E[B^n] = (-1)^{n+1} { (e^ρ/λ) n C^(n-1)(0)
///                       - e^ρ Σ_{p=1}^{n-1} (-1)^{n-p} C(n,p) E[B^{n-p}] C^(p)(0) }
/// ```
///
/// with the coefficients integrated numerically, so the result is
/// independent of the closed forms.
pub fn busy_period_moment_recursion(params: &QueueParams, max_order: usize) -> Result<MomentSet> {
    if params.a() <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "service",
            value: params.a(),
            expected: "must be > 0 for the moment recursion",
        });
    }
    if max_order == 0 || max_order > MAX_RECURSION_ORDER {
        return Err(Error::InvalidParameter {
            name: "order",
            value: max_order as f64,
            expected: "must lie in 1..=10",
        });
    }
    let coeffs = (0..max_order)
        .map(|n| recursion_coefficient(params, n))
        .collect::<Result<Vec<_>>>()?;
    let e_rho = params.rho().exp();
    let lambda = params.lambda();

    // raw[k] = E[B^k], raw[0] = 1
    let mut raw = vec![1.0];
    for n in 1..=max_order {
        let mut inner = e_rho / lambda * n as f64 * coeffs[n - 1];
        for p in 1..n {
            let sign = if (n - p) % 2 == 0 { 1.0 } else { -1.0 };
            inner -= e_rho * sign * binomial(n, p) * raw[n - p] * coeffs[p];
        }
        let sign = if (n + 1) % 2 == 0 { 1.0 } else { -1.0 };
        raw.push(sign * inner);
    }
    raw.remove(0);
    Ok(MomentSet::from_raw(raw))
}

/// `E[Z^n] = Σ_{p=0}^{n} C(n,p) (p!/λ^p) E[B^{n-p}]`.
pub fn busy_cycle_moment_from_busy_period(
    params: &QueueParams,
    busy_raw: &MomentSet,
    n: usize,
) -> Result<f64> {
    if n == 0 {
        return Ok(1.0);
    }
    if busy_raw.raw_moments.len() < n {
        return Err(Error::MissingMoments {
            needed: n,
            available: busy_raw.raw_moments.len(),
        });
    }
    let lambda = params.lambda();
    let mut total = 0.0;
    let mut factorial_over_power = 1.0; // p!/λ^p
    for p in 0..=n {
        if p > 0 {
            factorial_over_power *= p as f64 / lambda;
        }
        let b = busy_raw.raw(n - p).expect("checked above");
        total += binomial(n, p) * factorial_over_power * b;
    }
    Ok(total)
}
