use mdinf_core::mdinf::{compute_table, TableRequest};
use mdinf_core::{DistributionTable, QueueParams, Target};
use serde_json::json;

use crate::args::{Format, TableArgs};
use crate::error::CliError;
use crate::manifest::{Derived, Manifest, Parameters};
use crate::output::{json_bytes, sidecar_path, write_output, write_plot, Records};

const MAX_RANGE_POINTS: f64 = 1e6;

/// Expands `start:stop:step` to `start + k·step` for `k = 0, 1, ...` up to
/// and including `stop`.
pub fn parse_range(spec: &str) -> Result<Vec<f64>, CliError> {
    let bad = |why: &str| CliError::domain(format!("--t-range: {why}, got '{spec}'"));
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(bad("expected start:stop:step"));
    }
    let nums = parts
        .iter()
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| bad("start, stop and step must be numbers"))?;
    let (start, stop, step) = (nums[0], nums[1], nums[2]);
    if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
        return Err(bad("start, stop and step must be finite"));
    }
    if !(step > 0.0) {
        return Err(bad("step must be > 0"));
    }
    if stop < start {
        return Err(bad("stop must be >= start"));
    }
    let last = ((stop - start) / step + 1e-9).floor();
    if last + 1.0 > MAX_RANGE_POINTS {
        return Err(bad("more than 1e6 points"));
    }
    Ok((0..=last as u64).map(|k| start + k as f64 * step).collect())
}

fn grid(args: &TableArgs) -> Result<Vec<f64>, CliError> {
    match (&args.t, &args.t_range) {
        (Some(ts), None) => Ok(ts.clone()),
        (None, Some(r)) => parse_range(r),
        _ => Err(CliError::domain("exactly one of --t and --t-range is required")),
    }
}

pub fn records(table: &DistributionTable, with_bounds: bool) -> Records {
    let exact = table.rows.iter().any(|r| r.exact_exponential.is_some());
    let mut header = vec!["t", "cdf", "tau"];
    if with_bounds {
        header.extend(["bound_chebyshev", "bound_atom"]);
    }
    if exact {
        header.push("exact_exponential");
    }
    let mut out = Records::new(header);
    for r in &table.rows {
        let mut row = vec![r.t.into(), r.cdf.into(), r.tau.into()];
        if with_bounds {
            row.push(r.bound_chebyshev.unwrap_or(f64::NAN).into());
            row.push(r.bound_atom.unwrap_or(f64::NAN).into());
        }
        if exact {
            row.push(r.exact_exponential.unwrap_or(f64::NAN).into());
        }
        out.push(row);
    }
    out
}

pub fn manifest(subcommand: &str, args: &TableArgs, table: &DistributionTable) -> Manifest {
    let mut m = Manifest::new(
        subcommand,
        args.timestamp.as_deref(),
        Parameters {
            lambda: args.lambda,
            service: args.service,
            dt: Some(args.dt),
            dp: Some(args.dp),
            l_exponent: Some(args.l_exponent),
            t: args.t.clone(),
            t_range: args.t_range.clone(),
            with_bounds: Some(args.with_bounds),
            ..Parameters::default()
        },
    );
    m.derived = Some(Derived::new(&table.derived, &table.window));
    m.atom_adjacent_t = Some(table.rows.iter().filter(|r| r.atom_adjacent).map(|r| r.t).collect());
    m.clamped_t = Some(table.rows.iter().filter(|r| r.clamped).map(|r| r.t).collect());
    m
}

/// Computes the table a busy-period or busy-cycle invocation asks for.
pub fn build(args: &TableArgs, target: Target) -> Result<DistributionTable, CliError> {
    let ts = grid(args)?;
    let params = QueueParams::new(args.lambda, args.service)?;
    let request = TableRequest {
        params,
        target,
        delta_t: args.dt,
        delta_p: args.dp,
        l: args.l_exponent,
        with_bounds: args.with_bounds,
    };
    Ok(compute_table(&request, &ts)?)
}

pub fn run(args: &TableArgs, target: Target) -> Result<(), CliError> {
    let table = build(args, target)?;
    let manifest = manifest(target.as_str(), args, &table);
    let records = records(&table, args.with_bounds);
    let derived = manifest.derived;

    match args.format {
        Format::Csv => {
            write_output(args.output.as_deref(), &records.to_csv()?)?;
            if let Some(path) = &args.output {
                let side = json!({ "manifest": manifest, "derived": derived });
                write_output(Some(&sidecar_path(path)), &json_bytes(&side)?)?;
            }
        }
        Format::Json => {
            let report = json!({ "manifest": manifest, "rows": records.to_json(), "derived": derived });
            write_output(args.output.as_deref(), &json_bytes(&report)?)?;
        }
    }
    if let Some(path) = &args.plot {
        write_plot(path, table.rows.iter().map(|r| (r.t, r.cdf)))?;
    }
    Ok(())
}
