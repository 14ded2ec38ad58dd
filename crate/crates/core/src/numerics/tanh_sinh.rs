//! Tanh-sinh (double-exponential) quadrature on a finite interval.
//!
//! Abscissae near the endpoints are formed from their distance to the
//! endpoint, so integrable endpoint singularities are sampled accurately.

use super::sum::CompensatedSum;
use crate::error::{Error, Result};
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::FRAC_PI_2;

const T_MAX: f64 = 4.0;
const MAX_LEVEL: u32 = 8;

/// `(distance from a, weight)` for the node at `t`, per unit interval length.
#[inline]
fn node(t: f64) -> (f64, f64, f64) {
    let u = FRAC_PI_2 * t.sinh();
    let e = (-2.0 * u.abs()).exp();
    // fraction from the near endpoint, 1/(1+e^{2|u|})
    let near = e / (1.0 + e);
    let w = FRAC_PI_2 * t.cosh() * 2.0 * e / ((1.0 + e) * (1.0 + e));
    if u < 0.0 {
        (near, 1.0 - near, w)
    } else {
        (1.0 - near, near, w)
    }
}

/// Integrates `f` over `[a, b]`, doubling the node density until successive
/// estimates agree to the tolerance. Returns `(value, error)`.
pub fn tanh_sinh<F>(f: &F, a: f64, b: f64, rel: f64, abs: f64, par: bool) -> Result<(Complex64, f64)>
where
    F: Fn(f64) -> Complex64 + Sync,
{
    let len = b - a;
    let eval = |t: f64| -> Complex64 {
        let (from_a, from_b, w) = node(t);
        if w == 0.0 || from_a == 0.0 || from_b == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        // Pick the representation with the smaller rounding error.
        let x = if from_a < from_b { a + len * from_a } else { b - len * from_b };
        if x == a || x == b {
            return Complex64::new(0.0, 0.0);
        }
        f(x) * (w * len)
    };
    let sum_points = |ts: Vec<f64>| -> CompensatedSum {
        let vals: Vec<Complex64> = if par { ts.par_iter().map(|&t| eval(t)).collect() } else { ts.iter().map(|&t| eval(t)).collect() };
        let mut s = CompensatedSum::new();
        for v in vals {
            s.add(v);
        }
        s
    };

    let mut h = 0.5;
    let n0 = (T_MAX / h) as i64;
    let mut acc = sum_points((-n0..=n0).map(|j| j as f64 * h).collect());
    let mut estimate = acc.value() * h;
    let mut last_diff = f64::INFINITY;
    for _ in 1..=MAX_LEVEL {
        h *= 0.5;
        let n = (T_MAX / h) as i64;
        let odd = sum_points((-n..=n).filter(|j| j % 2 != 0).map(|j| j as f64 * h).collect());
        let mut merged = CompensatedSum::new();
        merged.add(acc.value());
        merged.add(odd.value());
        acc = merged;
        let next = acc.value() * h;
        let diff = (next - estimate).norm();
        estimate = next;
        if !estimate.re.is_finite() || !estimate.im.is_finite() {
            return Err(Error::NonDecay("tanh-sinh: non-finite integrand sample".into()));
        }
        // Convergence is roughly quadratic in the level, so once the
        // difference shrinks the next error is about diff^2/|I|.
        let target = abs.max(rel * estimate.norm());
        let predicted = diff * diff / estimate.norm().max(f64::MIN_POSITIVE);
        if diff <= target {
            return Ok((estimate, diff));
        }
        if diff < last_diff && diff < 1e-3 * estimate.norm() && predicted <= 0.1 * target {
            return Ok((estimate, predicted.max(f64::EPSILON * estimate.norm())));
        }
        last_diff = diff;
    }
    Ok((estimate, last_diff))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smooth() {
        let (v, _) = tanh_sinh(&|x: f64| Complex64::new(x.exp(), 0.0), 0.0, 1.0, 1e-13, 1e-300, false).unwrap();
        assert!((v.re - (1f64.exp() - 1.0)).abs() < 1e-13);
    }

    #[test]
    fn strong_endpoint_singularities() {
        let (v, _) = tanh_sinh(&|x: f64| Complex64::new(x.powf(-0.7) * (1.0 - x).ln(), 0.0), 0.0, 1.0, 1e-11, 1e-300, false).unwrap();
        // mpmath quad
        assert!((v.re - (-1.360_082_586_782_444)).abs() < 1e-9, "{v}");
    }

    #[test]
    fn log_singularity() {
        let (v, _) = tanh_sinh(&|x: f64| Complex64::new(x.ln(), 0.0), 0.0, 1.0, 1e-12, 1e-300, true).unwrap();
        assert!((v.re + 1.0).abs() < 1e-12);
    }
}
