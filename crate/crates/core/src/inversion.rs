//! Tail probabilities from Laplace–Stieltjes transforms.
//!
//! The distribution is treated as living on the window `[L - Δt, U + Δt]`,
//! wrapped onto a circle of period `T = U - L + 2Δt`. The tail indicator
//! `1{x > t}` on that circle is expanded in a Fourier series, smoothed by a
//! Gaussian of width `D`, and truncated after `N` harmonics:
//!
//! ```text
//! tau(t) = (U - t + Δt) / T
//!        + sum_{n=1}^{N} exp(-(D ω n)^2 / 2) / (π n) * Im{ (β^n - γ^n) L(jωn) }
//!
//! K = ln(2/Δp)   D = Δt / sqrt(2K)   ω = 2π / T   N = ceil(2K / (ω Δt))
//! β = exp(j (U + Δt) ω)              γ = exp(j t ω)
//! ```
//!
//! Provided the distribution puts negligible mass outside `[L, U]`, the
//! result satisfies
//!
//! ```text
//! P[X >= t + Δt] - Δp  <=  tau  <=  P[X > t - Δt] + Δp
//! ```
//!
//! The transform values `L(jωn)` do not depend on `t`, so they are evaluated
//! once into an [`InversionPlan`] and reused for every time point.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sum::NeumaierSum;

/// Exponents below this underflow `exp` to zero in double precision.
const MIN_EXPONENT: f64 = -745.0;

/// Tolerance for the `L(0) = 1` and `|L(jy)| <= 1` checks.
const TRANSFORM_TOLERANCE: f64 = 1e-9;

/// A Laplace–Stieltjes transform `L(s) = E[exp(-sX)]` of a distribution on
/// `[0, ∞)`.
pub trait LaplaceTransform: Sync {
    fn evaluate(&self, s: Complex64) -> Result<Complex64>;
}

impl<F> LaplaceTransform for F
where
    F: Fn(Complex64) -> Result<Complex64> + Sync,
{
    fn evaluate(&self, s: Complex64) -> Result<Complex64> {
        self(s)
    }
}

/// Accuracy `Δt`, precision `Δp` and the support window `[L, U]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InversionSpec {
    pub delta_t: f64,
    pub delta_p: f64,
    pub support_lower: f64,
    pub support_upper: f64,
}

impl InversionSpec {
    pub fn new(delta_t: f64, delta_p: f64, support_lower: f64, support_upper: f64) -> Result<Self> {
        let spec = Self {
            delta_t,
            delta_p,
            support_lower,
            support_upper,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.delta_t.is_finite() && self.delta_t > 0.0) {
            return Err(Error::InvalidDeltaT(self.delta_t));
        }
        if !(self.delta_p > 0.0 && self.delta_p < 0.5) {
            return Err(Error::InvalidDeltaP(self.delta_p));
        }
        let (l, u) = (self.support_lower, self.support_upper);
        if !(l.is_finite() && u.is_finite() && l >= 0.0 && u > l) {
            return Err(Error::InvalidWindow { lower: l, upper: u });
        }
        Ok(())
    }

    /// Period of the wrapped window, `U - L + 2Δt`.
    pub fn period(&self) -> f64 {
        self.support_upper - self.support_lower + 2.0 * self.delta_t
    }
}

/// Quantities derived from an [`InversionSpec`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedParams {
    /// `ln(2/Δp)`.
    pub k: f64,
    /// Gaussian smoothing width `Δt / sqrt(2K)`.
    pub d: f64,
    /// Fundamental frequency `2π / (U - L + 2Δt)`.
    pub omega: f64,
    /// Number of harmonics, `ceil(2K / (ωΔt))`.
    pub n_terms: u64,
}

impl DerivedParams {
    /// Weight `exp(-(Dωn)^2/2) / (πn)` of harmonic `n`; zero once the
    /// exponent underflows.
    pub fn damping_weight(&self, n: u64) -> f64 {
        let x = self.d * self.omega * n as f64;
        let exponent = -0.5 * x * x;
        if exponent < MIN_EXPONENT {
            0.0
        } else {
            exponent.exp() / (PI * n as f64)
        }
    }
}

pub fn derive_params(spec: &InversionSpec) -> Result<DerivedParams> {
    spec.validate()?;
    let k = (2.0 / spec.delta_p).ln();
    let d = spec.delta_t / (2.0 * k).sqrt();
    let omega = 2.0 * PI / spec.period();
    let n = (2.0 * k / (omega * spec.delta_t)).ceil();
    if !n.is_finite() || n > u64::MAX as f64 {
        return Err(Error::InvalidWindow {
            lower: spec.support_lower,
            upper: spec.support_upper,
        });
    }
    Ok(DerivedParams {
        k,
        d,
        omega,
        n_terms: (n as u64).max(1),
    })
}

/// One inverted point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailEstimate {
    pub t: f64,
    /// Raw estimate of `P[X > t]`; may leave `[0, 1]` by up to `Δp`.
    pub tau: f64,
    /// `1 - tau` after clamping `tau` to `[0, 1]`.
    pub cdf: f64,
    pub clamped: bool,
    pub spec: InversionSpec,
    pub derived: DerivedParams,
}

/// Results of inverting one transform on a grid of time points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailGrid {
    pub spec: InversionSpec,
    pub derived: DerivedParams,
    pub estimates: Vec<TailEstimate>,
}

#[derive(Debug, Clone, Copy)]
struct Harmonic {
    /// `w_n L(jωn)`.
    weighted: Complex64,
    /// `Im{β^n w_n L(jωn)}`.
    upper: f64,
}

/// Transform samples and weights for one `(transform, spec)` pair, ready to
/// be evaluated at any `t`.
#[derive(Debug, Clone)]
pub struct InversionPlan {
    spec: InversionSpec,
    derived: DerivedParams,
    harmonics: Vec<Harmonic>,
}

/// `exp(j 2π frac(n x))`; the angle is reduced in cycles before scaling so
/// the phase error stays at one rounding of `n x` for every `n`.
#[inline]
fn unit_phasor(n: u64, cycles: f64) -> (f64, f64) {
    let x = n as f64 * cycles;
    let angle = 2.0 * PI * (x - x.floor());
    angle.sin_cos()
}

impl InversionPlan {
    /// Checks the transform is proper (`L(0) = 1`) and samples it at
    /// `s = jωn` for `n = 1..=N`, verifying `|L(jωn)| <= 1` at every sample.
    pub fn new(transform: &(impl LaplaceTransform + ?Sized), spec: &InversionSpec) -> Result<Self> {
        let derived = derive_params(spec)?;
        let at_zero = transform.evaluate(Complex64::new(0.0, 0.0))?;
        if !((at_zero - 1.0).norm() <= TRANSFORM_TOLERANCE) {
            return Err(Error::ImproperTransform(at_zero));
        }

        let period = spec.period();
        let upper_cycles = (spec.support_upper + spec.delta_t) / period;
        // Weights decrease in n, so everything past the first underflow is zero.
        let n_live = (1..=derived.n_terms)
            .find(|&n| derived.damping_weight(n) == 0.0)
            .map_or(derived.n_terms, |n| n - 1);

        let harmonics: Vec<Result<Harmonic>> = (1..=n_live)
            .into_par_iter()
            .map(|n| {
                let y = derived.omega * n as f64;
                let value = transform
                    .evaluate(Complex64::new(0.0, y))
                    .map_err(|e| Error::Evaluation {
                        n,
                        source: Box::new(e),
                    })?;
                let modulus = value.norm();
                if modulus > 1.0 + TRANSFORM_TOLERANCE {
                    return Err(Error::UnboundedTransform { y, modulus });
                }
                let weighted = value * derived.damping_weight(n);
                let (sin, cos) = unit_phasor(n, upper_cycles);
                Ok(Harmonic {
                    weighted,
                    upper: sin * weighted.re + cos * weighted.im,
                })
            })
            .collect();
        let harmonics = harmonics.into_iter().collect::<Result<Vec<_>>>()?;

        Ok(Self {
            spec: *spec,
            derived,
            harmonics,
        })
    }

    pub fn spec(&self) -> &InversionSpec {
        &self.spec
    }

    pub fn derived(&self) -> &DerivedParams {
        &self.derived
    }

    /// Number of harmonics with a nonzero weight.
    pub fn live_terms(&self) -> usize {
        self.harmonics.len()
    }

    pub fn evaluate(&self, t: f64) -> Result<TailEstimate> {
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "t",
                value: t,
                expected: "must be finite and >= 0",
            });
        }
        let spec = &self.spec;
        let period = spec.period();
        let cycles = t / period;

        let mut acc = NeumaierSum::new();
        acc.add((spec.support_upper - t + spec.delta_t) / period);
        for (i, h) in self.harmonics.iter().enumerate() {
            let (sin, cos) = unit_phasor(i as u64 + 1, cycles);
            let lower = sin * h.weighted.re + cos * h.weighted.im;
            acc.add(h.upper - lower);
        }
        let tau = acc.total();
        if !tau.is_finite() {
            let n = self
                .harmonics
                .iter()
                .position(|h| !(h.upper.is_finite() && h.weighted.re.is_finite() && h.weighted.im.is_finite()))
                .map_or(self.harmonics.len() as u64, |i| i as u64 + 1);
            return Err(Error::NumericalInstability { n });
        }

        let clamped = !(0.0..=1.0).contains(&tau);
        Ok(TailEstimate {
            t,
            tau,
            cdf: 1.0 - tau.clamp(0.0, 1.0),
            clamped,
            spec: self.spec,
            derived: self.derived,
        })
    }

    /// Evaluates every point; output order follows `ts` regardless of how
    /// the work is scheduled.
    pub fn evaluate_grid(&self, ts: &[f64]) -> Result<Vec<TailEstimate>> {
        check_grid(ts)?;
        let results: Vec<Result<TailEstimate>> = ts
            .par_iter()
            .map(|&t| self.evaluate(t).map_err(|e| e.at_time(t)))
            .collect();
        results.into_iter().collect()
    }
}

fn check_grid(ts: &[f64]) -> Result<()> {
    for (i, t) in ts.iter().enumerate() {
        if !t.is_finite() || (i > 0 && *t <= ts[i - 1]) {
            return Err(Error::UnorderedGrid { index: i });
        }
    }
    Ok(())
}

/// Approximates `P[X > t]` for the distribution with transform `transform`.
pub fn invert_tail(
    transform: &(impl LaplaceTransform + ?Sized),
    t: f64,
    spec: &InversionSpec,
) -> Result<TailEstimate> {
    InversionPlan::new(transform, spec)?.evaluate(t)
}

/// Inverts at every point of a strictly increasing grid, sampling the
/// transform only once.
pub fn invert_grid(
    transform: &(impl LaplaceTransform + ?Sized),
    ts: &[f64],
    spec: &InversionSpec,
) -> Result<TailGrid> {
    check_grid(ts)?;
    let derived = derive_params(spec)?;
    if ts.is_empty() {
        return Ok(TailGrid {
            spec: *spec,
            derived,
            estimates: Vec::new(),
        });
    }
    let plan = InversionPlan::new(transform, spec)?;
    Ok(TailGrid {
        spec: *spec,
        derived,
        estimates: plan.evaluate_grid(ts)?,
    })
}
