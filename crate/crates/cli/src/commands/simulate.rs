use std::fs;

use mdinf_core::oracle::dkw_half_width;
use mdinf_core::{run_simulation, EmpiricalCdf, QueueParams, SimConfig, Target};
use serde::Serialize;
use serde_json::json;

use crate::args::{Format, SimulateArgs};
use crate::error::CliError;
use crate::manifest::{Manifest, Parameters};
use crate::output::{format_number, json_bytes, sidecar_path, write_output, Records};

/// Confidence level of the reported DKW band is `1 - DKW_ALPHA`.
pub const DKW_ALPHA: f64 = 0.01;

#[derive(Debug, Serialize)]
pub struct Summary {
    pub n: usize,
    pub seed: u64,
    pub mean: f64,
    pub variance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub atom_fraction: Option<f64>,
    pub dkw_half_width_99: f64,
}

pub fn summary(ecdf: &EmpiricalCdf, target: Target, service: f64) -> Summary {
    Summary {
        n: ecdf.len(),
        seed: ecdf.seed(),
        mean: ecdf.mean(),
        variance: ecdf.variance(),
        atom_fraction: (target == Target::BusyPeriod).then(|| ecdf.atom_fraction(service)),
        dkw_half_width_99: dkw_half_width(ecdf.len(), DKW_ALPHA),
    }
}

pub fn run(args: &SimulateArgs) -> Result<(), CliError> {
    let params = QueueParams::new(args.lambda, args.service)?;
    let config = SimConfig::new(params, args.samples, args.seed)?;
    let target: Target = args.kind.into();
    let ecdf = run_simulation(&config, target);

    let ts = args.t.clone().unwrap_or_default();
    let mut records = Records::new(vec!["t", "ecdf"]);
    for &t in &ts {
        records.push(vec![t.into(), ecdf.evaluate(t).into()]);
    }
    let manifest = Manifest::new(
        "simulate",
        args.timestamp.as_deref(),
        Parameters {
            lambda: args.lambda,
            service: args.service,
            t: args.t.clone(),
            kind: Some(target.as_str().to_string()),
            samples: Some(args.samples),
            seed: Some(args.seed),
            ..Parameters::default()
        },
    );
    let summary = summary(&ecdf, target, args.service);

    match args.format {
        Format::Json => {
            let report = json!({ "manifest": manifest, "summary": summary, "rows": records.to_json() });
            write_output(args.output.as_deref(), &json_bytes(&report)?)?;
        }
        Format::Csv => {
            write_output(args.output.as_deref(), &records.to_csv()?)?;
            if let Some(path) = &args.output {
                let side = json!({ "manifest": manifest, "summary": summary });
                write_output(Some(&sidecar_path(path)), &json_bytes(&side)?)?;
            }
        }
    }
    if let Some(path) = &args.dump {
        let mut text = String::with_capacity(ecdf.len() * 20);
        for &x in ecdf.samples() {
            text.push_str(&format_number(x));
            text.push('\n');
        }
        fs::write(path, text).map_err(|e| CliError::io(path, e))?;
    }
    Ok(())
}
