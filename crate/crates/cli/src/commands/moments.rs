use mdinf_core::mdinf::{
    busy_cycle_moment_from_busy_period, busy_cycle_moments, busy_period_moment_recursion,
    busy_period_moments, MAX_RECURSION_ORDER,
};
use mdinf_core::{MomentSet, QueueParams};
use serde::Serialize;

use crate::args::MomentsArgs;
use crate::error::CliError;
use crate::manifest::{Manifest, Parameters};
use crate::output::{json_bytes, write_output};

#[derive(Debug, Serialize)]
pub struct MeanVariance {
    pub mean: f64,
    pub variance: f64,
}

impl From<&MomentSet> for MeanVariance {
    fn from(m: &MomentSet) -> Self {
        Self {
            mean: m.mean,
            variance: m.variance,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct RecursionReport {
    pub order: usize,
    pub busy_period_raw_moments: Vec<f64>,
    pub busy_cycle_raw_moments: Vec<f64>,
    /// Largest relative gap to the closed forms over the orders they cover.
    pub max_relative_deviation: f64,
}

#[derive(Debug, Serialize)]
pub struct MomentsReport {
    pub manifest: Manifest,
    pub busy_period: MeanVariance,
    pub busy_cycle: MeanVariance,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub recursion: Option<RecursionReport>,
}

fn relative_gap(got: f64, want: f64) -> f64 {
    ((got - want) / want).abs()
}

pub fn build(args: &MomentsArgs) -> Result<MomentsReport, CliError> {
    if args.order == 0 || args.order > MAX_RECURSION_ORDER {
        return Err(CliError::domain(format!(
            "--order: must lie in 1..={MAX_RECURSION_ORDER}, got {}",
            args.order
        )));
    }
    let params = QueueParams::new(args.lambda, args.service)?;
    let b = busy_period_moments(&params);
    let z = busy_cycle_moments(&params);

    let recursion = if args.recursion {
        let rec = busy_period_moment_recursion(&params, args.order)?;
        let cycle = (1..=args.order)
            .map(|n| busy_cycle_moment_from_busy_period(&params, &rec, n))
            .collect::<Result<Vec<_>, _>>()?;
        let closed_b = [b.mean, b.variance + b.mean * b.mean];
        let closed_z = [z.mean, z.variance + z.mean * z.mean];
        let covered = args.order.min(2);
        let max_relative_deviation = (0..covered)
            .flat_map(|i| [relative_gap(rec.raw_moments[i], closed_b[i]), relative_gap(cycle[i], closed_z[i])])
            .fold(0.0, f64::max);
        Some(RecursionReport {
            order: args.order,
            busy_period_raw_moments: rec.raw_moments,
            busy_cycle_raw_moments: cycle,
            max_relative_deviation,
        })
    } else {
        None
    };

    let manifest = Manifest::new(
        "moments",
        args.timestamp.as_deref(),
        Parameters {
            lambda: args.lambda,
            service: args.service,
            order: Some(args.order),
            recursion: Some(args.recursion),
            ..Parameters::default()
        },
    );
    Ok(MomentsReport {
        manifest,
        busy_period: (&b).into(),
        busy_cycle: (&z).into(),
        recursion,
    })
}

pub fn run(args: &MomentsArgs) -> Result<(), CliError> {
    let report = build(args)?;
    write_output(args.output.as_deref(), &json_bytes(&report)?)
}
