//! Benchmark fixtures shared by the criterion targets.

use mdinf_core::mdinf::{truncation_window, QueueParams, Target};
use mdinf_core::InversionSpec;

/// `(params, spec)` for a busy-period table with `l = 3`.
pub fn busy_period_setup(lambda: f64, a: f64, delta_t: f64, delta_p: f64) -> (QueueParams, InversionSpec) {
    let params = QueueParams::new(lambda, a).expect("valid parameters");
    let w = truncation_window(&params, delta_p, 3, Target::BusyPeriod).expect("valid window");
    let spec = InversionSpec::new(delta_t, delta_p, w.lower, w.upper).expect("valid spec");
    (params, spec)
}
