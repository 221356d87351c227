//! Adaptive Gauss–Kronrod (7/15) quadrature on a finite interval.

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];

// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_INTERVALS: usize = 4096;

fn kronrod<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> (f64, f64) {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(center);
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kron += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kron * half, ((kron - gauss) * half).abs())
}

struct Piece {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

/// Integrates `f` over `[lo, hi]` to relative accuracy `rel_tol`, always
/// bisecting the piece with the largest error estimate.
pub fn integrate<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, rel_tol: f64) -> Result<f64> {
    let (value, error) = kronrod(&f, lo, hi);
    let mut pieces = vec![Piece { lo, hi, value, error }];
    loop {
        let total: f64 = pieces.iter().map(|p| p.value).sum();
        let err: f64 = pieces.iter().map(|p| p.error).sum();
        if !(total.is_finite() && err.is_finite()) {
            return Err(Error::Quadrature {
                achieved: f64::INFINITY,
                requested: rel_tol,
            });
        }
        if err <= rel_tol * total.abs() || err == 0.0 {
            return Ok(total);
        }
        let worst = pieces
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.error.total_cmp(&b.1.error))
            .map(|(i, _)| i)
            .expect("at least one piece");
        let Piece { lo, hi, .. } = pieces.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        if pieces.len() + 2 > MAX_INTERVALS || !(lo < mid && mid < hi) {
            return Err(Error::Quadrature {
                achieved: err / total.abs().max(f64::MIN_POSITIVE),
                requested: rel_tol,
            });
        }
        for (a, b) in [(lo, mid), (mid, hi)] {
            let (value, error) = kronrod(&f, a, b);
            pieces.push(Piece { lo: a, hi: b, value, error });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let v = integrate(|x| x * x * x, 0.0, 2.0, 1e-14).unwrap();
        assert!((v - 4.0).abs() < 1e-14);
    }

    #[test]
    fn exponential_integral() {
        let v = integrate(|t: f64| (-t).exp(), 0.0, 1.0, 1e-13).unwrap();
        assert!((v - (1.0 - (-1.0f64).exp())).abs() < 1e-15);
    }

    #[test]
    fn peaked_integrand_refines() {
        // ∫_{-1}^{1} 1/(1e-4 + x^2) dx = 2 atan(100)/1e-2
        let v = integrate(|x| 1.0 / (1e-4 + x * x), -1.0, 1.0, 1e-12).unwrap();
        let exact = 2.0 * 100.0f64.atan() / 1e-2;
        assert!(((v - exact) / exact).abs() < 1e-11);
    }

    #[test]
    fn jump_is_resolved_by_bisection() {
        let v = integrate(|x: f64| if x < 1.0 / 3.0 { 0.0 } else { 1.0 }, 0.0, 1.0, 1e-12).unwrap();
        assert!((v - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn divergent_integral_fails() {
        let r = integrate(|x: f64| 1.0 / x, 0.0, 1.0, 1e-12);
        assert!(matches!(r, Err(Error::Quadrature { .. })), "{r:?}");
    }
}
