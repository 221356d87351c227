//! Tail probabilities by Fourier-series inversion of Laplace–Stieltjes
//! transforms, with M/D/∞ busy-period and busy-cycle analytics and a
//! Monte Carlo oracle to check them against.

pub mod error;
pub mod inversion;
pub mod mdinf;
pub mod oracle;
mod quad;
pub mod sum;

pub use error::{Error, ErrorKind, Result};
pub use inversion::{
    derive_params, invert_grid, invert_tail, DerivedParams, InversionPlan, InversionSpec,
    LaplaceTransform, TailEstimate, TailGrid,
};
pub use mdinf::{DistributionTable, MomentSet, QueueParams, Target};
pub use oracle::{run_simulation, EmpiricalCdf, SimConfig};
