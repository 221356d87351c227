use num_complex::Complex64;

use super::QueueParams;
use crate::error::{Error, Result};
use crate::inversion::LaplaceTransform;

const SINGULAR_MODULUS: f64 = 1e-300;

/// `B(s) = 1 + λ⁻¹(s - (s+λ)s / (λe^{-(s+λ)a} + s))`.
///
/// Evaluated in the algebraically equal form `1 + s(E - 1)/(λE + s)` with
/// `E = e^{-(s+λ)a}`, which avoids subtracting two terms of size `|s|` on
/// the imaginary axis.
#[derive(Debug, Clone, Copy)]
pub struct BusyPeriodTransform {
    lambda: f64,
    a: f64,
}

impl LaplaceTransform for BusyPeriodTransform {
    fn evaluate(&self, s: Complex64) -> Result<Complex64> {
        let e = (-(s + self.lambda) * self.a).exp();
        let denom = self.lambda * e + s;
        if denom.norm() < SINGULAR_MODULUS {
            return Err(Error::SingularEvaluation(s));
        }
        Ok(1.0 + s * (e - 1.0) / denom)
    }
}

/// `λ/(λ + s)`: the exponential idle period.
#[derive(Debug, Clone, Copy)]
pub struct IdleTransform {
    lambda: f64,
}

impl LaplaceTransform for IdleTransform {
    fn evaluate(&self, s: Complex64) -> Result<Complex64> {
        let denom = s + self.lambda;
        if denom.norm() < SINGULAR_MODULUS {
            return Err(Error::Pole(s));
        }
        Ok(self.lambda / denom)
    }
}

/// `I(s) B(s)`; with zero service the busy period vanishes and only the
/// idle factor remains.
#[derive(Debug, Clone, Copy)]
pub struct BusyCycleTransform {
    idle: IdleTransform,
    busy: Option<BusyPeriodTransform>,
}

impl LaplaceTransform for BusyCycleTransform {
    fn evaluate(&self, s: Complex64) -> Result<Complex64> {
        let idle = self.idle.evaluate(s)?;
        match &self.busy {
            Some(b) => Ok(idle * b.evaluate(s)?),
            None => Ok(idle),
        }
    }
}

pub fn busy_period_transform(params: &QueueParams) -> Result<BusyPeriodTransform> {
    if params.a() <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "service",
            value: params.a(),
            expected: "must be > 0 for the busy-period transform (zero service gives a busy period of length 0)",
        });
    }
    Ok(BusyPeriodTransform {
        lambda: params.lambda(),
        a: params.a(),
    })
}

pub fn idle_transform(params: &QueueParams) -> IdleTransform {
    IdleTransform {
        lambda: params.lambda(),
    }
}

pub fn busy_cycle_transform(params: &QueueParams) -> BusyCycleTransform {
    let busy = if params.a() > 0.0 {
        Some(BusyPeriodTransform {
            lambda: params.lambda(),
            a: params.a(),
        })
    } else {
        None
    };
    BusyCycleTransform {
        idle: idle_transform(params),
        busy,
    }
}
