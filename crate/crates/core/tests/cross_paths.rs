//! Agreement between the inversion, series, closed-form and simulation paths.

use mdinf_core::mdinf::{
    atom_bound, busy_cycle_moment_from_busy_period, busy_cycle_moments, busy_period_moment_recursion,
    busy_period_moments, busy_period_transform, chebyshev_bound, truncation_window, SeriesCdf,
};
use mdinf_core::oracle::dkw_half_width;
use mdinf_core::{invert_grid, run_simulation, InversionSpec, QueueParams, SimConfig, Target};

fn params(lambda: f64, a: f64) -> QueueParams {
    QueueParams::new(lambda, a).unwrap()
}

/// Inversion output stays inside `[F(t-Δt) - Δp, F((t+Δt)-) + Δp]` with the
/// series CDF as `F`, widened by the series' own truncation.
fn check_bracket(lambda: f64, a: f64, delta_t: f64, delta_p: f64, ts: &[f64]) {
    let p = params(lambda, a);
    let w = truncation_window(&p, delta_p, 3, Target::BusyPeriod).unwrap();
    let spec = InversionSpec::new(delta_t, delta_p, w.lower, w.upper).unwrap();
    let grid = invert_grid(&busy_period_transform(&p).unwrap(), ts, &spec).unwrap();
    let series = SeriesCdf::with_defaults(&p).unwrap();
    let slack = 1e-6 + series.neglected_weight();
    for e in &grid.estimates {
        let lo = series.evaluate(e.t - delta_t) - delta_p - slack;
        let hi = series.evaluate_left(e.t + delta_t) + delta_p + slack;
        assert!(lo <= e.cdf && e.cdf <= hi, "λ={lambda} a={a} t={}: {} not in [{lo}, {hi}]", e.t, e.cdf);
    }
}

#[test]
fn inversion_inside_series_bracket_low_load() {
    check_bracket(1.0, 0.1, 0.001, 0.001, &[0.1, 0.11, 0.15, 0.2, 0.25]);
}

#[test]
fn inversion_inside_series_bracket_unit_load() {
    check_bracket(1.0, 1.0, 0.1, 0.001, &[1.0, 2.0, 3.0, 4.0, 5.0]);
}

#[test]
fn inversion_inside_series_bracket_high_load() {
    let ts = [3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0, 15.0, 20.0, 25.0, 30.0, 40.0, 60.0, 85.0];
    check_bracket(1.0, 3.0, 0.5, 0.01, &ts);
}

#[test]
fn series_and_simulation_agree() {
    let p = params(1.0, 1.0);
    let series = SeriesCdf::with_defaults(&p).unwrap();
    let sim = run_simulation(&SimConfig::new(p, 100_000, 2024).unwrap(), Target::BusyPeriod);
    let band = dkw_half_width(sim.len(), 0.01);
    for k in 0..20 {
        let t = 1.0 + 0.25 * k as f64;
        let gap = (sim.evaluate(t) - series.evaluate(t)).abs();
        assert!(gap <= band + 1e-4, "t={t}: gap {gap} > {band}");
    }
    let v = series.evaluate(2.0);
    assert!((v - sim.evaluate(2.0)).abs() < 0.01);
}

#[test]
fn bounds_lie_below_series() {
    for &(lambda, a) in &[(1.0, 0.1), (1.0, 1.0), (1.0, 3.0), (2.0, 1.0)] {
        let p = params(lambda, a);
        let series = SeriesCdf::new(&p, 1e-8, a / 512.0).unwrap();
        for k in 0..400 {
            let t = a * (0.5 + k as f64 * 0.1);
            let cheb = chebyshev_bound(&p, t).unwrap();
            if cheb.valid {
                assert!(cheb.value <= series.evaluate(t) + 1e-8, "λ={lambda} a={a} t={t}");
            }
            if t != a {
                assert!(atom_bound(&p, t) <= series.evaluate(t) + 1e-12);
            }
        }
    }
}

#[test]
fn window_truncation_is_sound() {
    for &a in &[0.1, 1.0] {
        let p = params(1.0, a);
        let delta_p = 0.001;
        let w = truncation_window(&p, delta_p, 3, Target::BusyPeriod).unwrap();
        let series = SeriesCdf::new(&p, 1e-10, a / 512.0).unwrap();
        let tail = 1.0 - series.evaluate(w.upper);
        assert!(tail < delta_p * 1e-3 * 1.1, "a={a}: tail {tail}");
    }
}

#[test]
fn series_is_nondecreasing_and_reaches_one() {
    let p = params(1.0, 1.0);
    let series = SeriesCdf::with_defaults(&p).unwrap();
    let mut prev = 0.0;
    for k in 0..4000 {
        let v = series.evaluate(k as f64 * 0.005);
        assert!(v >= prev);
        prev = v;
    }
    assert!(1.0 - series.evaluate(200.0) <= 1e-6 + 1e-12);
}

#[test]
fn recursion_matches_closed_forms() {
    for &rho in &[0.1, 0.5, 1.0, 2.0, 3.0] {
        for &lambda in &[1.0, 2.5] {
            let p = params(lambda, rho / lambda);
            let rec = busy_period_moment_recursion(&p, 2).unwrap();
            let closed = busy_period_moments(&p);
            assert!(((rec.mean - closed.mean) / closed.mean).abs() < 1e-9);
            assert!(((rec.variance - closed.variance) / closed.variance).abs() < 1e-9, "ρ={rho}");

            let z = busy_cycle_moments(&p);
            let z1 = busy_cycle_moment_from_busy_period(&p, &closed, 1).unwrap();
            let z2 = busy_cycle_moment_from_busy_period(&p, &closed, 2).unwrap();
            assert!(((z1 - z.mean) / z.mean).abs() < 1e-9);
            assert!(((z2 - z1 * z1 - z.variance) / z.variance).abs() < 1e-9);
        }
    }
}

#[test]
fn transform_matches_simulated_laplace_value() {
    let p = params(1.0, 1.0);
    let sim = run_simulation(&SimConfig::new(p, 1_000_000, 5).unwrap(), Target::BusyPeriod);
    let xs: Vec<f64> = sim.samples().iter().map(|b| (-b).exp()).collect();
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    let exact = 2.0 - 2.0 / ((-2.0f64).exp() + 1.0);
    assert!((mean - exact).abs() < 3.0 * (var / n).sqrt());
}
