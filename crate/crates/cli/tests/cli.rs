use std::fs;
use std::process::{Command, Output};

use mdinf_core::mdinf::truncation_window;
use mdinf_core::{derive_params, InversionSpec, QueueParams, Target};
use serde_json::Value;

fn mdinf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mdinf")).args(args).output().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = mdinf(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&stdout(args)).unwrap()
}

const BP: [&str; 9] = ["busy-period", "--lambda", "1", "--service", "1", "--dt", "0.1", "--dp", "0.001"];

fn with<'a>(base: &[&'a str], extra: &[&'a str]) -> Vec<&'a str> {
    [base, extra].concat()
}

#[test]
fn domain_errors_exit_2_and_name_the_flag() {
    let cases: [(&[&str], &str); 6] = [
        (&with(&BP[..8], &["0.7", "--t", "1"]), "--dp"),
        (&["busy-period", "--lambda", "1", "--service", "0", "--dt", "0.1", "--dp", "0.001", "--t", "1"], "--service"),
        (&["busy-period", "--lambda", "-1", "--service", "1", "--dt", "0.1", "--dp", "0.001", "--t", "1"], "--lambda"),
        (&with(&BP, &["--t-range", "3:1:1"]), "--t-range"),
        (&["moments", "--lambda", "1", "--service", "1", "--order", "11"], "--order"),
        (&["reproduce-table", "9.9", "--output", "unused"], "9.9"),
    ];
    for (args, needle) in cases {
        let out = mdinf(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains(needle), "{args:?}: {err}");
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn zero_threads_is_rejected() {
    let out = mdinf(&with(&["--threads", "0"], &with(&BP, &["--t", "1"])));
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn range_and_list_agree() {
    let a = stdout(&with(&BP, &["--t", "1,1.5,2,2.5,3"]));
    let b = stdout(&with(&BP, &["--t-range", "1:3:0.5"]));
    assert_eq!(a, b);
}

#[test]
fn csv_layout() {
    let text = stdout(&with(&BP, &["--t", "1,2", "--with-bounds"]));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,cdf,tau,bound_chebyshev,bound_atom");
    assert_eq!(lines.len(), 3);
    assert!(!text.contains('\r'));
    let cycle = stdout(&["busy-cycle", "--lambda", "1", "--service", "0", "--dt", "0.01", "--dp", "0.001", "--t", "1"]);
    assert!(cycle.starts_with("t,cdf,tau,exact_exponential\n"));
}

#[test]
fn csv_and_json_carry_the_same_numbers() {
    let csv = stdout(&with(&BP, &["--t", "1,2,3", "--with-bounds"]));
    let doc = json(&with(&BP, &["--t", "1,2,3", "--with-bounds", "--format", "json"]));
    let rows = doc["rows"].as_array().unwrap();
    for (line, row) in csv.lines().skip(1).zip(rows) {
        let fields: Vec<f64> = line.split(',').map(|f| f.parse().unwrap()).collect();
        for (i, key) in ["t", "cdf", "tau", "bound_chebyshev", "bound_atom"].iter().enumerate() {
            assert_eq!(fields[i], row[key].as_f64().unwrap(), "{key}");
        }
    }
}

#[test]
fn manifest_reproduces_derived_parameters() {
    let doc = json(&with(&BP, &["--t", "2", "--format", "json", "--timestamp", "2026-01-01T00:00:00Z"]));
    let m = &doc["manifest"];
    assert_eq!(m["timestamp"], "2026-01-01T00:00:00Z");
    let p = &m["parameters"];
    let params = QueueParams::new(p["lambda"].as_f64().unwrap(), p["service"].as_f64().unwrap()).unwrap();
    let dp = p["dp"].as_f64().unwrap();
    let l = p["l_exponent"].as_u64().unwrap() as u32;
    let w = truncation_window(&params, dp, l, Target::BusyPeriod).unwrap();
    let spec = InversionSpec::new(p["dt"].as_f64().unwrap(), dp, w.lower, w.upper).unwrap();
    let d = derive_params(&spec).unwrap();
    let got = &m["derived"];
    assert_eq!(got["K"].as_f64().unwrap().to_bits(), d.k.to_bits());
    assert_eq!(got["D"].as_f64().unwrap().to_bits(), d.d.to_bits());
    assert_eq!(got["omega"].as_f64().unwrap().to_bits(), d.omega.to_bits());
    assert_eq!(got["N"].as_u64().unwrap(), d.n_terms);
    assert_eq!(got["U"].as_f64().unwrap().to_bits(), w.upper.to_bits());
}

#[test]
fn atom_adjacent_rows_are_listed() {
    let doc = json(&with(&BP, &["--t", "1,1.05,2", "--format", "json"]));
    let listed: Vec<f64> = doc["manifest"]["atom_adjacent_t"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .collect();
    assert_eq!(listed, vec![1.0, 1.05]);
}

#[test]
fn file_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("bp.csv");
    let plot = dir.path().join("bp.dat");
    let printed = stdout(&with(
        &BP,
        &["--t", "1,2", "--output", out.to_str().unwrap(), "--plot", plot.to_str().unwrap()],
    ));
    assert!(printed.is_empty());
    let csv = fs::read_to_string(&out).unwrap();
    assert!(csv.starts_with("t,cdf,tau\n"));
    let side: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("bp.csv.manifest.json")).unwrap()).unwrap();
    assert_eq!(side["manifest"]["subcommand"], "busy-period");
    let plot = fs::read_to_string(&plot).unwrap();
    let lines: Vec<&str> = plot.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[0].starts_with('#'));
    let cdf_csv = csv.lines().nth(2).unwrap().split(',').nth(1).unwrap();
    let cdf_plot = lines[2].split_whitespace().nth(1).unwrap();
    assert_eq!(cdf_csv, cdf_plot);
}

#[test]
fn moments_report() {
    let doc = json(&["moments", "--lambda", "1", "--service", "3", "--recursion", "--order", "4"]);
    let bp = &doc["busy_period"];
    assert!((bp["mean"].as_f64().unwrap() - 19.085536923187668).abs() < 1e-12);
    assert!((bp["variance"].as_f64().unwrap() / 281.9155718 - 1.0).abs() < 1e-8);
    let cycle_var = doc["busy_cycle"]["variance"].as_f64().unwrap();
    assert!((cycle_var - 282.9155718).abs() < 1e-6, "{cycle_var}");
    let rec = &doc["recursion"];
    assert_eq!(rec["busy_period_raw_moments"].as_array().unwrap().len(), 4);
    assert!(rec["max_relative_deviation"].as_f64().unwrap() < 1e-9);
}

#[test]
fn simulate_outputs() {
    let doc = json(&["simulate", "--lambda", "1", "--service", "0", "--kind", "busy-period", "--samples", "100", "--t", "0,1"]);
    assert_eq!(doc["summary"]["mean"], 0.0);
    assert_eq!(doc["summary"]["atom_fraction"], 1.0);
    assert_eq!(doc["rows"][1]["ecdf"], 1.0);

    let dir = tempfile::tempdir().unwrap();
    let dump = dir.path().join("s.txt");
    let csv = stdout(&[
        "simulate", "--lambda", "1", "--service", "1", "--kind", "busy-cycle", "--samples", "500", "--seed", "3",
        "--format", "csv", "--t", "1,2", "--dump", dump.to_str().unwrap(),
    ]);
    assert!(csv.starts_with("t,ecdf\n"));
    let samples: Vec<f64> = fs::read_to_string(&dump).unwrap().lines().map(|l| l.parse().unwrap()).collect();
    assert_eq!(samples.len(), 500);
    assert!(samples.windows(2).all(|w| w[0] <= w[1]));
    assert!(samples[0] > 1.0);
}

#[test]
fn reproduce_table_writes_both_files() {
    let dir = tempfile::tempdir().unwrap();
    let line = stdout(&["reproduce-table", "3.2", "--output", dir.path().to_str().unwrap()]);
    assert_eq!(line.lines().count(), 1);
    assert!(line.starts_with("table 3.2:"));
    let csv = fs::read_to_string(dir.path().join("table-3.2.csv")).unwrap();
    assert!(csv.starts_with("t,cdf,printed_cdf,cdf_deviation,bound_chebyshev"));
    assert_eq!(csv.lines().count(), 6);
    let doc: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("table-3.2.json")).unwrap()).unwrap();
    assert_eq!(doc["manifest"]["parameters"]["table_id"], "3.2");
    assert_eq!(doc["moments"]["atom_mass"].as_f64().unwrap(), (-1f64).exp());
}
