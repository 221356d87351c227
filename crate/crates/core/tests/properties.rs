use mdinf_core::mdinf::{busy_period_transform, idle_transform, truncation_window, SeriesCdf};
use mdinf_core::{derive_params, invert_grid, invert_tail, InversionPlan, InversionSpec, QueueParams, Target};
use proptest::prelude::*;

fn exponential_spec(lambda: f64, delta_t: f64, delta_p: f64) -> InversionSpec {
    let p = QueueParams::new(lambda, 0.0).unwrap();
    let w = truncation_window(&p, delta_p, 3, Target::BusyCycle).unwrap();
    InversionSpec::new(delta_t, delta_p, w.lower, w.upper).unwrap()
}

fn survival(lambda: f64, x: f64) -> f64 {
    (-lambda * x.max(0.0)).exp()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn exponential_bracket(
        lambda in 0.2f64..5.0,
        dt_scaled in 0.02f64..0.3,
        log_dp in -4.0f64..-1.4,
        t_scaled in 0.0f64..8.0,
    ) {
        let delta_t = dt_scaled / lambda;
        let delta_p = 10f64.powf(log_dp);
        let t = t_scaled / lambda;
        let spec = exponential_spec(lambda, delta_t, delta_p);
        let p = QueueParams::new(lambda, 0.0).unwrap();
        let est = invert_tail(&idle_transform(&p), t, &spec).unwrap();
        prop_assert!(est.tau >= survival(lambda, t + delta_t) - delta_p - 1e-12);
        prop_assert!(est.tau <= survival(lambda, t - delta_t) + delta_p + 1e-12);
        prop_assert!((0.0..=1.0).contains(&est.cdf));
    }

    #[test]
    fn quasi_monotone_busy_period(a in 0.2f64..2.0, t1_scaled in 1.0f64..6.0, gap in 0.0f64..3.0) {
        let p = QueueParams::new(1.0, a).unwrap();
        let (delta_t, delta_p) = (0.05, 0.005);
        let w = truncation_window(&p, delta_p, 3, Target::BusyPeriod).unwrap();
        let spec = InversionSpec::new(delta_t, delta_p, w.lower, w.upper).unwrap();
        let t1 = a * t1_scaled;
        let t2 = t1 + 2.0 * delta_t + gap;
        let grid = invert_grid(&busy_period_transform(&p).unwrap(), &[t1, t2], &spec).unwrap();
        prop_assert!(grid.estimates[1].cdf >= grid.estimates[0].cdf - 2.0 * delta_p);
    }

    #[test]
    fn damping_weights_positive(log_dp in -6.0f64..-0.31, delta_t in 0.001f64..1.0, width in 1.0f64..100.0) {
        let spec = InversionSpec::new(delta_t, 10f64.powf(log_dp), 0.0, width).unwrap();
        let d = derive_params(&spec).unwrap();
        prop_assert!(d.k > 4f64.ln());
        prop_assert!(d.n_terms >= 1);
        for n in [1, d.n_terms / 2 + 1, d.n_terms] {
            let w = d.damping_weight(n);
            prop_assert!(w.is_finite() && w >= 0.0);
        }
        prop_assert_eq!(derive_params(&spec).unwrap(), d);
    }

    #[test]
    fn series_nondecreasing(lambda in 0.3f64..3.0, a in 0.1f64..2.0, t1 in 0.0f64..20.0, dt in 0.0f64..5.0) {
        let p = QueueParams::new(lambda, a).unwrap();
        let s = SeriesCdf::new(&p, 1e-6, a / 64.0).unwrap();
        prop_assert!(s.evaluate(t1 + dt) >= s.evaluate(t1));
    }
}

#[test]
fn grid_matches_pointwise_under_any_pool() {
    let p = QueueParams::new(1.0, 1.0).unwrap();
    let w = truncation_window(&p, 0.001, 3, Target::BusyPeriod).unwrap();
    let spec = InversionSpec::new(0.1, 0.001, w.lower, w.upper).unwrap();
    let transform = busy_period_transform(&p).unwrap();
    let ts = [1.0, 1.5, 2.0, 3.0, 4.0, 5.0];
    let grid = invert_grid(&transform, &ts, &spec).unwrap();
    let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let again = single.install(|| invert_grid(&transform, &ts, &spec).unwrap());
    assert_eq!(grid, again);
    let plan = InversionPlan::new(&transform, &spec).unwrap();
    for (e, &t) in grid.estimates.iter().zip(&ts) {
        assert_eq!(e.tau.to_bits(), plan.evaluate(t).unwrap().tau.to_bits());
    }
}
