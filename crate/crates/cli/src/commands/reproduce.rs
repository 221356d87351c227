use std::fs;

use mdinf_core::mdinf::{busy_cycle_moments, busy_period_moments, compute_table, moments_from_table, TableRequest};
use mdinf_core::{DistributionTable, QueueParams, Target};
use serde::Serialize;

use crate::args::ReproduceArgs;
use crate::error::CliError;
use crate::manifest::{Derived, Manifest, Parameters};
use crate::output::{json_bytes, to_value, write_output, Field, Records};
use crate::reference::{self, Column, ReferenceMoments, ReferenceTable, TABLE_IDS};

pub const L_EXPONENT: u32 = 3;

#[derive(Debug, Clone, Serialize)]
pub struct RowComparison {
    pub t: f64,
    pub cdf: f64,
    pub printed_cdf: f64,
    pub cdf_deviation: f64,
    pub bound_chebyshev: Option<f64>,
    pub printed_bound_chebyshev: Option<f64>,
    pub bound_atom: Option<f64>,
    pub printed_bound_atom: Option<f64>,
    pub exact_exponential: Option<f64>,
    pub printed_poisson: Option<f64>,
    pub atom_adjacent: bool,
    /// Row takes part in the CDF deviation gate: past `a + Δt` and not a
    /// documented misprint.
    pub gated: bool,
    pub known_misprint: Vec<Column>,
    pub suspected_misprint: Vec<Column>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MomentCheck {
    pub exact_mean: f64,
    pub exact_variance: f64,
    pub recovered_mean: f64,
    pub recovered_variance: f64,
    pub mean_relative_error: f64,
    pub variance_relative_error: f64,
    pub uncovered_tail: f64,
    pub atom_at: f64,
    pub atom_mass: f64,
    pub printed: ReferenceMoments,
    pub printed_exact_variance_known_misprint: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub gated_rows: usize,
    pub max_cdf_deviation_gated: f64,
    pub max_cdf_deviation_all: f64,
    /// Over printed bound cells that are not documented misprints.
    pub max_chebyshev_deviation: Option<f64>,
    pub max_atom_deviation: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct Reproduction {
    pub reference: &'static ReferenceTable,
    pub table: DistributionTable,
    pub rows: Vec<RowComparison>,
    pub moments: Option<MomentCheck>,
    pub summary: Summary,
}

fn dev(a: Option<f64>, b: Option<f64>) -> Option<f64> {
    Some((a? - b?).abs())
}

fn max_of(xs: impl Iterator<Item = f64>) -> Option<f64> {
    xs.fold(None, |m, x| Some(m.map_or(x, |m: f64| m.max(x))))
}

pub fn lookup(id: &str) -> Result<&'static ReferenceTable, CliError> {
    reference::table(id).ok_or_else(|| {
        CliError::domain(format!("unknown table id '{id}'; expected one of {}", TABLE_IDS.join(", ")))
    })
}

pub fn reproduce(id: &str) -> Result<Reproduction, CliError> {
    let reference = lookup(id)?;
    let params = QueueParams::new(reference.lambda, reference.service)?;
    let busy_period = reference.target == Target::BusyPeriod;
    let request = TableRequest {
        params,
        target: reference.target,
        delta_t: reference.delta_t,
        delta_p: reference.delta_p,
        l: L_EXPONENT,
        with_bounds: busy_period,
    };
    let table = compute_table(&request, &reference.ts())?;

    let rows: Vec<RowComparison> = table
        .rows
        .iter()
        .zip(reference.rows)
        .map(|(row, printed)| {
            let t = row.t;
            let columns = [Column::Cdf, Column::BoundChebyshev];
            let known: Vec<Column> = columns
                .into_iter()
                .filter(|&c| reference.known_misprint(c, t).is_some())
                .collect();
            let suspected: Vec<Column> = columns
                .into_iter()
                .filter(|&c| reference.suspected_misprint(c, t).is_some())
                .collect();
            RowComparison {
                t,
                cdf: row.cdf,
                printed_cdf: printed.cdf,
                cdf_deviation: (row.cdf - printed.cdf).abs(),
                bound_chebyshev: row.bound_chebyshev,
                printed_bound_chebyshev: printed.bound_chebyshev,
                bound_atom: row.bound_atom,
                printed_bound_atom: printed.bound_atom,
                exact_exponential: row.exact_exponential,
                printed_poisson: printed.poisson,
                atom_adjacent: row.atom_adjacent,
                gated: t > reference.service + reference.delta_t && !known.contains(&Column::Cdf),
                known_misprint: known,
                suspected_misprint: suspected,
            }
        })
        .collect();

    let moments = match reference.moments {
        Some(printed) => {
            let (exact, atom_mass) = if busy_period {
                (busy_period_moments(&params), params.atom_mass())
            } else {
                (busy_cycle_moments(&params), 0.0)
            };
            let got = moments_from_table(&table, params.a(), atom_mass)?;
            Some(MomentCheck {
                exact_mean: exact.mean,
                exact_variance: exact.variance,
                recovered_mean: got.moments.mean,
                recovered_variance: got.moments.variance,
                mean_relative_error: (got.moments.mean - exact.mean) / exact.mean,
                variance_relative_error: (got.moments.variance - exact.variance) / exact.variance,
                uncovered_tail: got.uncovered_tail,
                atom_at: params.a(),
                atom_mass,
                printed,
                printed_exact_variance_known_misprint: reference.known_misprint(Column::ExactVariance, f64::NAN).is_some(),
            })
        }
        None => None,
    };

    let gated: Vec<&RowComparison> = rows.iter().filter(|r| r.gated).collect();
    let summary = Summary {
        gated_rows: gated.len(),
        max_cdf_deviation_gated: gated.iter().map(|r| r.cdf_deviation).fold(0.0, f64::max),
        max_cdf_deviation_all: rows.iter().map(|r| r.cdf_deviation).fold(0.0, f64::max),
        max_chebyshev_deviation: max_of(
            rows.iter()
                .filter(|r| !r.known_misprint.contains(&Column::BoundChebyshev))
                .filter_map(|r| dev(r.bound_chebyshev, r.printed_bound_chebyshev)),
        ),
        max_atom_deviation: max_of(rows.iter().filter_map(|r| dev(r.bound_atom, r.printed_bound_atom))),
    };

    Ok(Reproduction {
        reference,
        table,
        rows,
        moments,
        summary,
    })
}

fn column_list(cols: &[Column]) -> Field {
    let names: Vec<&str> = cols
        .iter()
        .map(|c| match c {
            Column::Cdf => "cdf",
            Column::BoundChebyshev => "bound_chebyshev",
            Column::ExactVariance => "exact_variance",
        })
        .collect();
    Field::Text(names.join(";"))
}

fn opt(x: Option<f64>) -> Field {
    Field::Num(x.unwrap_or(f64::NAN))
}

pub fn records(rep: &Reproduction) -> Records {
    let bounds = rep.reference.target == Target::BusyPeriod;
    let poisson = rep.rows.iter().any(|r| r.printed_poisson.is_some());
    let mut header = vec!["t", "cdf", "printed_cdf", "cdf_deviation"];
    if bounds {
        header.extend([
            "bound_chebyshev",
            "printed_bound_chebyshev",
            "bound_chebyshev_deviation",
            "bound_atom",
            "printed_bound_atom",
            "bound_atom_deviation",
        ]);
    }
    if poisson {
        header.extend(["exact_exponential", "printed_poisson"]);
    }
    header.extend(["atom_adjacent", "gated", "known_misprint", "suspected_misprint"]);

    let mut out = Records::new(header);
    for r in &rep.rows {
        let mut row: Vec<Field> = vec![r.t.into(), r.cdf.into(), r.printed_cdf.into(), r.cdf_deviation.into()];
        if bounds {
            row.extend([
                opt(r.bound_chebyshev),
                opt(r.printed_bound_chebyshev),
                opt(dev(r.bound_chebyshev, r.printed_bound_chebyshev)),
                opt(r.bound_atom),
                opt(r.printed_bound_atom),
                opt(dev(r.bound_atom, r.printed_bound_atom)),
            ]);
        }
        if poisson {
            row.extend([opt(r.exact_exponential), opt(r.printed_poisson)]);
        }
        row.extend([
            r.atom_adjacent.into(),
            r.gated.into(),
            column_list(&r.known_misprint),
            column_list(&r.suspected_misprint),
        ]);
        out.push(row);
    }
    out
}

pub fn manifest(rep: &Reproduction, timestamp: Option<&str>) -> Manifest {
    let r = rep.reference;
    let mut m = Manifest::new(
        "reproduce-table",
        timestamp,
        Parameters {
            lambda: r.lambda,
            service: r.service,
            dt: Some(r.delta_t),
            dp: Some(r.delta_p),
            l_exponent: Some(L_EXPONENT),
            t: Some(r.ts()),
            with_bounds: Some(r.target == Target::BusyPeriod),
            kind: Some(r.target.as_str().to_string()),
            table_id: Some(r.id.to_string()),
            ..Parameters::default()
        },
    );
    m.derived = Some(Derived::new(&rep.table.derived, &rep.table.window));
    m.atom_adjacent_t = Some(rep.rows.iter().filter(|r| r.atom_adjacent).map(|r| r.t).collect());
    m.clamped_t = Some(rep.table.rows.iter().filter(|r| r.clamped).map(|r| r.t).collect());
    m
}

pub fn run(args: &ReproduceArgs) -> Result<(), CliError> {
    let rep = reproduce(&args.table_id)?;
    let manifest = manifest(&rep, args.timestamp.as_deref());
    let records = records(&rep);

    fs::create_dir_all(&args.output).map_err(|e| CliError::io(&args.output, e))?;
    let csv_path = args.output.join(format!("table-{}.csv", rep.reference.id));
    let json_path = args.output.join(format!("table-{}.json", rep.reference.id));

    let report = serde_json::json!({
        "manifest": manifest,
        "derived": manifest.derived,
        "rows": records.to_json(),
        "summary": to_value(&rep.summary)?,
        "moments": to_value(&rep.moments)?,
        "reference": to_value(rep.reference)?,
    });
    write_output(Some(&csv_path), &records.to_csv()?)?;
    write_output(Some(&json_path), &json_bytes(&report)?)?;

    let line = format!(
        "table {}: max |cdf - printed| = {:.3e} over {} gated rows; wrote {} and {}\n",
        rep.reference.id,
        rep.summary.max_cdf_deviation_gated,
        rep.summary.gated_rows,
        csv_path.display(),
        json_path.display()
    );
    write_output(None, line.as_bytes())
}
