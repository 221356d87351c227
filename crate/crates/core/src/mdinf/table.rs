use serde::{Deserialize, Serialize};

use super::bounds::target_chebyshev;
use super::{atom_bound, busy_cycle_transform, busy_period_transform, truncation_window};
use super::{MomentSet, QueueParams, Target, Window};
use crate::error::{Error, Result};
use crate::inversion::{invert_grid, DerivedParams, InversionSpec, TailGrid};

/// Inputs for a CDF table of the busy period or busy cycle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TableRequest {
    pub params: QueueParams,
    pub target: Target,
    pub delta_t: f64,
    pub delta_p: f64,
    /// Exponent `l` in the `10^l` safety factor of the truncation window.
    pub l: u32,
    pub with_bounds: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub t: f64,
    pub cdf: f64,
    pub tau: f64,
    pub bound_chebyshev: Option<f64>,
    pub bound_atom: Option<f64>,
    /// `1 - e^{-λt}`, only for the busy cycle with zero service.
    pub exact_exponential: Option<f64>,
    pub clamped: bool,
    /// Busy-period rows within `Δt` of the atom, where the inverted value
    /// smears the jump and is not trustworthy.
    pub atom_adjacent: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionTable {
    pub target: Target,
    pub params: QueueParams,
    pub l: u32,
    pub window: Window,
    pub spec: InversionSpec,
    pub derived: DerivedParams,
    pub rows: Vec<TableRow>,
}

impl DistributionTable {
    pub fn points(&self) -> Vec<(f64, f64)> {
        self.rows.iter().map(|r| (r.t, r.cdf)).collect()
    }
}

/// Inverts the target's transform over `ts` on its Chebyshev truncation
/// window and attaches the bound columns.
pub fn compute_table(request: &TableRequest, ts: &[f64]) -> Result<DistributionTable> {
    let params = &request.params;
    let window = truncation_window(params, request.delta_p, request.l, request.target)?;
    let spec = InversionSpec::new(request.delta_t, request.delta_p, window.lower, window.upper)?;
    let grid: TailGrid = match request.target {
        Target::BusyPeriod => invert_grid(&busy_period_transform(params)?, ts, &spec)?,
        Target::BusyCycle => invert_grid(&busy_cycle_transform(params), ts, &spec)?,
    };

    let poisson = request.target == Target::BusyCycle && params.a() == 0.0;
    let rows = grid
        .estimates
        .iter()
        .map(|e| {
            let (bound_chebyshev, bound_atom) = if request.with_bounds {
                let cheb = target_chebyshev(params, request.target, e.t)?.value;
                let atom = match request.target {
                    Target::BusyPeriod => atom_bound(params, e.t),
                    Target::BusyCycle => 0.0,
                };
                (Some(cheb), Some(atom))
            } else {
                (None, None)
            };
            Ok(TableRow {
                t: e.t,
                cdf: e.cdf,
                tau: e.tau,
                bound_chebyshev,
                bound_atom,
                exact_exponential: poisson.then(|| -(-params.lambda() * e.t).exp_m1()),
                clamped: e.clamped,
                atom_adjacent: request.target == Target::BusyPeriod
                    && (e.t - params.a()).abs() <= request.delta_t,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(DistributionTable {
        target: request.target,
        params: *params,
        l: request.l,
        window,
        spec: grid.spec,
        derived: grid.derived,
        rows,
    })
}

/// Mean and variance recovered from a CDF table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableMoments {
    pub moments: MomentSet,
    /// `1 - cdf` at the last row: mass the table does not cover and the
    /// estimate ignores.
    pub uncovered_tail: f64,
}

/// Moments of a table, with the CDF at `atom_at` forced to `atom_mass` and
/// zero just left of it. Decreases in the CDF larger than `2Δp` are
/// rejected.
pub fn moments_from_table(table: &DistributionTable, atom_at: f64, atom_mass: f64) -> Result<TableMoments> {
    moments_from_points(&table.points(), atom_at, atom_mass, 2.0 * table.spec.delta_p)
}

/// Trapezoidal moments from `(t, cdf)` points sorted by `t`.
///
/// `E[X] = ∫ S(t) dt` and `E[X²] = ∫ 2t S(t) dt` with `S = 1 - F`, the
/// survival function taken as 1 on `[0, t_0)` when the first point is past
/// zero. A nonzero `atom_mass` marks `atom_at` as the lower end of the
/// support with a jump of that size: the row there (inserted if missing)
/// gets `cdf = atom_mass`, and `0` just left of it.
pub fn moments_from_points(
    points: &[(f64, f64)],
    atom_at: f64,
    atom_mass: f64,
    tolerance: f64,
) -> Result<TableMoments> {
    if points.is_empty() {
        return Err(Error::InvalidParameter {
            name: "table",
            value: 0.0,
            expected: "must contain at least one row",
        });
    }
    for (i, w) in points.windows(2).enumerate() {
        if !(w[1].0 > w[0].0) || !w[1].0.is_finite() {
            return Err(Error::UnorderedGrid { index: i + 1 });
        }
        let drop = w[0].1 - w[1].1;
        if drop > tolerance {
            return Err(Error::NonMonotoneTable {
                t: w[1].0,
                drop,
                tolerance,
            });
        }
    }
    if !(points[0].0 >= 0.0) {
        return Err(Error::UnorderedGrid { index: 0 });
    }

    // (t, survival just left of t, survival at t)
    let mut nodes: Vec<(f64, f64, f64)> = points.iter().map(|&(t, f)| (t, 1.0 - f, 1.0 - f)).collect();
    if atom_mass > 0.0 {
        let at = nodes.partition_point(|n| n.0 < atom_at);
        if at == nodes.len() || nodes[at].0 != atom_at {
            nodes.insert(at, (atom_at, 0.0, 0.0));
        }
        nodes[at] = (atom_at, 1.0, 1.0 - atom_mass);
    }
    if nodes[0].0 > 0.0 {
        nodes.insert(0, (0.0, 1.0, 1.0));
    }

    let mut first = 0.0;
    let mut second = 0.0;
    for w in nodes.windows(2) {
        let (t0, _, right0) = w[0];
        let (t1, left1, _) = w[1];
        let h = t1 - t0;
        first += h * (right0 + left1) / 2.0;
        second += h * (2.0 * t0 * right0 + 2.0 * t1 * left1) / 2.0;
    }
    let variance = second - first * first;
    let last_cdf = points[points.len() - 1].1;
    Ok(TableMoments {
        moments: MomentSet {
            mean: first,
            variance,
            raw_moments: vec![first, second],
        },
        uncovered_tail: 1.0 - last_cdf,
    })
}
