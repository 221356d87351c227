//! Monte Carlo simulation of M/D/∞ busy periods and busy cycles.
//!
//! Sample `i` of a run draws from its own ChaCha8 generator keyed by a
//! splitmix64 mix of `(seed, i)`, so a run's output is the same for any
//! thread count or evaluation order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mdinf::{QueueParams, Target};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub params: QueueParams,
    pub n_samples: usize,
    pub seed: u64,
}

impl SimConfig {
    pub fn new(params: QueueParams, n_samples: usize, seed: u64) -> Result<Self> {
        if n_samples == 0 {
            return Err(Error::InvalidParameter {
                name: "samples",
                value: 0.0,
                expected: "must be >= 1",
            });
        }
        Ok(Self {
            params,
            n_samples,
            seed,
        })
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed for sample `index` of a run seeded with `seed`.
pub fn sample_seed(seed: u64, index: u64) -> u64 {
    splitmix64(splitmix64(seed) ^ index)
}

/// Exponential(λ) by inversion; `u` is uniform on `(0, 1]`.
fn exponential(rng: &mut ChaCha8Rng, lambda: f64) -> f64 {
    let u = 1.0 - rng.random::<f64>();
    -u.ln() / lambda
}

fn busy_period_from(rng: &mut ChaCha8Rng, params: &QueueParams) -> f64 {
    let a = params.a();
    if a == 0.0 {
        return 0.0;
    }
    let mut departure = a;
    let mut clock = 0.0;
    loop {
        clock += exponential(rng, params.lambda());
        if clock > departure {
            return departure;
        }
        departure = clock + a;
    }
}

/// One busy period: starts with an arrival at time 0 and ends at the first
/// departure not followed by an arrival before it.
pub fn simulate_busy_period(params: &QueueParams, sample_seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(sample_seed);
    busy_period_from(&mut rng, params)
}

/// One busy cycle: an exponential idle period plus an independent busy
/// period. The idle draw comes from a separate stream of the same key.
pub fn simulate_busy_cycle(params: &QueueParams, sample_seed: u64) -> f64 {
    let mut idle_rng = ChaCha8Rng::seed_from_u64(sample_seed);
    idle_rng.set_stream(1);
    let idle = exponential(&mut idle_rng, params.lambda());
    idle + simulate_busy_period(params, sample_seed)
}

/// Sorted samples with their generating seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalCdf {
    samples: Vec<f64>,
    seed: u64,
}

impl EmpiricalCdf {
    pub fn from_samples(mut samples: Vec<f64>, seed: u64) -> Self {
        samples.sort_by(f64::total_cmp);
        Self { samples, seed }
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Fraction of samples `<= t`.
    pub fn evaluate(&self, t: f64) -> f64 {
        self.samples.partition_point(|&x| x <= t) as f64 / self.len() as f64
    }

    /// Fraction of samples `< t`.
    pub fn evaluate_left(&self, t: f64) -> f64 {
        self.samples.partition_point(|&x| x < t) as f64 / self.len() as f64
    }

    pub fn mean(&self) -> f64 {
        self.samples.iter().sum::<f64>() / self.len() as f64
    }

    /// Unbiased sample variance; zero for a single sample.
    pub fn variance(&self) -> f64 {
        let n = self.len();
        if n < 2 {
            return 0.0;
        }
        let mean = self.mean();
        self.samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64
    }

    /// Fraction of samples exactly equal to `at`.
    pub fn atom_fraction(&self, at: f64) -> f64 {
        let lo = self.samples.partition_point(|&x| x < at);
        let hi = self.samples.partition_point(|&x| x <= at);
        (hi - lo) as f64 / self.len() as f64
    }

    /// Dvoretzky–Kiefer–Wolfowitz half-width at confidence `1 - alpha`.
    pub fn dkw_half_width(&self, alpha: f64) -> f64 {
        dkw_half_width(self.len(), alpha)
    }
}

/// `sqrt(ln(2/α) / (2n))`.
pub fn dkw_half_width(n: usize, alpha: f64) -> f64 {
    ((2.0 / alpha).ln() / (2.0 * n as f64)).sqrt()
}

pub fn run_simulation(config: &SimConfig, target: Target) -> EmpiricalCdf {
    let params = config.params;
    let samples: Vec<f64> = (0..config.n_samples as u64)
        .into_par_iter()
        .map(|i| {
            let s = sample_seed(config.seed, i);
            match target {
                Target::BusyPeriod => simulate_busy_period(&params, s),
                Target::BusyCycle => simulate_busy_cycle(&params, s),
            }
        })
        .collect();
    EmpiricalCdf::from_samples(samples, config.seed)
}
