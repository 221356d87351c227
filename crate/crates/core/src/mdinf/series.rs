//! Busy-period CDF as a compound geometric sum.
//!
//! Every arrival that lands before the current departure extends the busy
//! period by its inter-arrival gap, so
//!
//! ```text
//! B = a + Y_1 + ... + Y_M,   P[M = n] = e^{-ρ} (1 - e^{-ρ})^n
//! ```
//!
//! with `Y_i` exponential(λ) conditioned on `Y < a`. The CDF is
//! `B(t) = Σ_n e^{-ρ}(1-e^{-ρ})^n F_n(t - a)` with `F_n` the CDF of
//! `Y_1 + ... + Y_n`. `Y` is discretized on a uniform grid (each cell's
//! probability placed at its center node) and the truncated geometric sum
//! of its convolution powers is formed in the frequency domain. The grid
//! is long enough to hold the full support of the truncated sum, so the
//! circular convolution never wraps.

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use super::QueueParams;
use crate::error::{Error, Result};
use crate::sum::NeumaierSum;

pub const DEFAULT_TAIL_EPSILON: f64 = 1e-6;

/// Default number of grid cells per service time.
pub const DEFAULT_GRID_CELLS: u32 = 512;

const MAX_GRID_LEN: usize = 1 << 24;

/// A series CDF value with the truncation it was computed under.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesValue {
    pub cdf: f64,
    pub n_max: usize,
    /// `Σ_{n > n_max} e^{-ρ}(1-e^{-ρ})^n = (1-e^{-ρ})^{n_max+1}`.
    pub neglected_weight: f64,
}

/// Precomputed series CDF, cheap to evaluate at any `t`.
#[derive(Debug, Clone)]
pub struct SeriesCdf {
    a: f64,
    step: f64,
    atom: f64,
    /// `cumulative[j]` = P[discretized sum <= node j], read as the CDF at
    /// `(j + 1/2) * step` past the service time.
    cumulative: Vec<f64>,
    n_max: usize,
    neglected_weight: f64,
}

fn cells_per_service(a: f64, step: f64) -> Result<usize> {
    if !(step.is_finite() && step > 0.0) {
        return Err(Error::InvalidParameter {
            name: "grid_step",
            value: step,
            expected: "must be finite and > 0",
        });
    }
    let ratio = a / step;
    let cells = ratio.round();
    if cells < 1.0 || (ratio - cells).abs() > 1e-9 * ratio.max(1.0) {
        return Err(Error::GridNotAligned { service: a, step });
    }
    Ok(cells as usize)
}

impl SeriesCdf {
    pub fn new(params: &QueueParams, tail_epsilon: f64, grid_step: f64) -> Result<Self> {
        let a = params.a();
        if a <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "service",
                value: a,
                expected: "must be > 0 for the series CDF",
            });
        }
        if !(tail_epsilon > 0.0 && tail_epsilon < 1.0) {
            return Err(Error::InvalidParameter {
                name: "tail_epsilon",
                value: tail_epsilon,
                expected: "must lie in the open interval (0, 1)",
            });
        }
        let m = cells_per_service(a, grid_step)?;
        let lambda = params.lambda();
        let p = params.atom_mass();
        let q = -(-params.rho()).exp_m1();

        // Smallest n_max with q^{n_max+1} < tail_epsilon.
        let mut terms = if q > 0.0 {
            (tail_epsilon.ln() / q.ln()).ceil().max(1.0) as usize
        } else {
            1
        };
        while q.powi(terms as i32) >= tail_epsilon {
            terms += 1;
        }
        let n_max = terms - 1;
        let neglected_weight = q.powi(terms as i32);

        let support = n_max * m + 1;
        let len = support.next_power_of_two();
        if len > MAX_GRID_LEN {
            return Err(Error::SeriesGridTooLarge {
                cells: len,
                limit: MAX_GRID_LEN,
            });
        }

        let h = a / m as f64;
        let mut buf = vec![Complex64::new(0.0, 0.0); len];
        if n_max > 0 {
            // Cell masses of Y: [0, h/2] at node 0, ((k-1/2)h, (k+1/2)h] at k,
            // (a - h/2, a] at node m.
            buf[0].re = -(-lambda * h / 2.0).exp_m1() / q;
            let interior = 2.0 * (lambda * h / 2.0).sinh() / q;
            for (k, c) in buf.iter_mut().enumerate().take(m).skip(1) {
                c.re = (-lambda * k as f64 * h).exp() * interior;
            }
            buf[m].re = ((-lambda * (m as f64 - 0.5) * h).exp() - p) / q;
        }

        let mut planner = FftPlanner::<f64>::new();
        planner.plan_fft_forward(len).process(&mut buf);
        let exponent = u32::try_from(terms).map_err(|_| Error::SeriesGridTooLarge {
            cells: terms,
            limit: u32::MAX as usize,
        })?;
        for c in buf.iter_mut() {
            let r = q * *c;
            *c = if n_max == 0 {
                Complex64::new(p, 0.0)
            } else {
                p * (1.0 - r.powu(exponent)) / (1.0 - r)
            };
        }
        planner.plan_fft_inverse(len).process(&mut buf);

        let scale = 1.0 / len as f64;
        let mut cumulative = Vec::with_capacity(support);
        let mut acc = NeumaierSum::new();
        let mut last = 0.0f64;
        for c in &buf[..support] {
            acc.add((c.re * scale).max(0.0));
            last = last.max(acc.total());
            cumulative.push(last.min(1.0));
        }

        Ok(Self {
            a,
            step: h,
            atom: p,
            cumulative,
            n_max,
            neglected_weight,
        })
    }

    pub fn with_defaults(params: &QueueParams) -> Result<Self> {
        Self::new(
            params,
            DEFAULT_TAIL_EPSILON,
            params.a() / f64::from(DEFAULT_GRID_CELLS),
        )
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn neglected_weight(&self) -> f64 {
        self.neglected_weight
    }

    pub fn grid_step(&self) -> f64 {
        self.step
    }

    /// `P[B <= t]`.
    pub fn evaluate(&self, t: f64) -> f64 {
        if t < self.a {
            return 0.0;
        }
        let u = (t - self.a) / self.step;
        let g = &self.cumulative;
        let v = if u < 0.5 {
            self.atom + (g[0] - self.atom) * (u / 0.5)
        } else {
            let pos = u - 0.5;
            let j = pos.floor() as usize;
            if j + 1 >= g.len() {
                g[g.len() - 1]
            } else {
                let frac = pos - j as f64;
                g[j] + frac * (g[j + 1] - g[j])
            }
        };
        v.clamp(0.0, 1.0)
    }

    /// `P[B < t]`.
    pub fn evaluate_left(&self, t: f64) -> f64 {
        if t <= self.a {
            0.0
        } else {
            self.evaluate(t)
        }
    }

    pub fn value(&self, t: f64) -> SeriesValue {
        SeriesValue {
            cdf: self.evaluate(t),
            n_max: self.n_max,
            neglected_weight: self.neglected_weight,
        }
    }

    /// Mean of the discretized, truncated distribution.
    pub fn grid_mean(&self) -> f64 {
        let mut prev = 0.0;
        let mut total = NeumaierSum::new();
        for (j, &g) in self.cumulative.iter().enumerate() {
            total.add((self.a + j as f64 * self.step) * (g - prev));
            prev = g;
        }
        total.total()
    }
}

/// Busy-period CDF at `t` from the compound geometric series.
pub fn series_cdf(params: &QueueParams, t: f64, tail_epsilon: f64, grid_step: f64) -> Result<SeriesValue> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "t",
            value: t,
            expected: "must be finite and >= 0",
        });
    }
    Ok(SeriesCdf::new(params, tail_epsilon, grid_step)?.value(t))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(lambda: f64, a: f64) -> QueueParams {
        QueueParams::new(lambda, a).unwrap()
    }

    #[test]
    fn zero_before_service_and_atom_at_service() {
        let p = params(1.0, 1.0);
        let s = SeriesCdf::with_defaults(&p).unwrap();
        assert_eq!(s.evaluate(0.5), 0.0);
        assert_eq!(s.evaluate(0.999_999), 0.0);
        assert!((s.evaluate(1.0) - (-1.0f64).exp()).abs() < 1e-15);
        assert_eq!(s.evaluate_left(1.0), 0.0);
    }

    #[test]
    fn truncation_bookkeeping() {
        let p = params(1.0, 1.0);
        let v = series_cdf(&p, 2.0, 1e-6, 1.0 / 512.0).unwrap();
        let q = 1.0 - (-1.0f64).exp();
        assert!(v.neglected_weight < 1e-6);
        assert!(q.powi(v.n_max as i32) >= 1e-6);
        assert!((v.neglected_weight - q.powi(v.n_max as i32 + 1)).abs() < 1e-18);
    }

    #[test]
    fn grid_must_divide_service() {
        let p = params(1.0, 1.0);
        assert!(matches!(
            SeriesCdf::new(&p, 1e-6, 0.3),
            Err(Error::GridNotAligned { .. })
        ));
        assert!(series_cdf(&p, -1.0, 1e-6, 0.25).is_err());
    }

    #[test]
    fn mean_matches_closed_form() {
        for &(l, a) in &[(1.0, 0.1), (1.0, 1.0), (1.0, 3.0), (2.5, 0.4)] {
            let p = params(l, a);
            let s = SeriesCdf::new(&p, 1e-10, a / 512.0).unwrap();
            let exact = p.rho().exp_m1() / l;
            // Cell rounding shifts each summand by O(h^2).
            assert!(((s.grid_mean() - exact) / exact).abs() < 1e-5, "λ={l} a={a} {} vs {exact}", s.grid_mean());
        }
    }

    #[test]
    fn half_nodes_hold_exact_cell_sums() {
        // With a tiny ρ the n <= 1 terms dominate, and at a half node the
        // n = 1 term is the exact Y CDF.
        let p = params(0.01, 1.0);
        let s = SeriesCdf::new(&p, 1e-12, 1.0 / 64.0).unwrap();
        let atom = (-0.01f64).exp();
        let q = 1.0 - atom;
        let x: f64 = 31.5 / 64.0;
        let f_y = (1.0 - (-0.01 * x).exp()) / q;
        // n >= 2 contributes at most atom * q^2.
        let got = s.evaluate(1.0 + x);
        let first = atom + atom * q * f_y;
        assert!((got - first).abs() <= atom * q * q + 1e-12);
    }

    #[test]
    fn reaches_one_up_to_neglected_weight() {
        let p = params(1.0, 1.0);
        let s = SeriesCdf::with_defaults(&p).unwrap();
        let far = s.evaluate(1e4);
        assert!((1.0 - far - s.neglected_weight()).abs() < 1e-9);
    }
}
