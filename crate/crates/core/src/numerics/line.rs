//! Line integrals over the real axis with asymptotic tail correction.

use super::gk::{adaptive, Tolerance};
use super::tail::power_tail;
use super::{ErrorBudget, QuadSpec};
use crate::error::{Error, Result};
use num_complex::Complex64;

/// Asymptotic form `f(s) ~ C_± |s|^p e^{i w s}` for `s -> ±inf`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineModel {
    pub exponent: Complex64,
    pub frequency: f64,
}

impl LineModel {
    pub fn algebraic(p: f64) -> Self {
        Self { exponent: Complex64::new(p, 0.0), frequency: 0.0 }
    }
}

/// `0, 1/4, 1/2, 1, 2, 4, ...` up to `s_max` inclusive.
pub fn geometric_breaks(s_max: f64) -> Vec<f64> {
    let mut b = vec![0.0];
    let mut x = 0.25;
    while x < s_max {
        b.push(x);
        x *= 2.0;
    }
    b.push(s_max);
    b
}

/// Tail `int_S^inf f` from the model. Returns `(value, error)`.
///
/// Without oscillation the amplitude is expanded as `C0 + C1/s + C2/s^2`
/// from samples at `S, 2S, 4S`; the `C2` term serves as the error. With
/// oscillation the amplitude is fitted at `S` and checked at `2S`.
pub(crate) fn model_tail<F>(f: &F, model: LineModel, big_s: f64) -> (Complex64, f64)
where
    F: Fn(f64) -> Complex64,
{
    let p = model.exponent;
    let w = model.frequency;
    let amp = |s: f64| f(s) / ((p * s.ln()).exp() * Complex64::new(0.0, w * s).exp());
    let c1 = amp(big_s);
    let c2 = amp(2.0 * big_s);
    if !(c1.re.is_finite() && c1.im.is_finite()) {
        return (Complex64::new(0.0, 0.0), f64::INFINITY);
    }
    if w == 0.0 {
        let c4 = amp(4.0 * big_s);
        if c2.re.is_finite() && c2.im.is_finite() && c4.re.is_finite() && c4.im.is_finite() {
            // Amplitude in u = S/s at u = 1, 1/2, 1/4.
            let d2 = 8.0 / 3.0 * (c1 - 3.0 * c2 + 2.0 * c4);
            let d1 = 2.0 * (c1 - c2) - 1.5 * d2;
            let d0 = c1 - d1 - d2;
            // int_S^inf s^{p-j} ds = S^{p+1-j} / (j - p - 1)
            let t = |j: f64| (p * big_s.ln()).exp() * big_s / (j - p - 1.0);
            let value = d0 * t(0.0) + d1 * t(1.0) + d2 * t(2.0);
            return (value, (d2 * t(2.0)).norm() + 64.0 * f64::EPSILON * value.norm());
        }
    }
    let (unit, series_err) = power_tail(p, w, big_s);
    let value = c1 * unit;
    let spread = (c1 - c2).norm() * unit.norm();
    (value, spread + series_err * c1.norm())
}

fn check_model(model: LineModel) -> Result<()> {
    if model.frequency == 0.0 && model.exponent.re >= -1.0 {
        return Err(Error::NonDecay(format!("line tail exponent {} must have real part < -1", model.exponent)));
    }
    Ok(())
}

/// `int_0^inf f(s) ds` with geometric panels up to `big_s` and a model tail.
pub fn integrate_half_line<F>(f: &F, model: LineModel, big_s: f64, tol: Tolerance, par: bool) -> Result<(Complex64, ErrorBudget)>
where
    F: Fn(f64) -> Complex64 + Sync,
{
    check_model(model)?;
    let breaks = geometric_breaks(big_s);
    let r = adaptive(f, &breaks, tol, par)?;
    let (t, te) = model_tail(f, model, big_s);
    let rounding = 4.0 * f64::EPSILON * r.l1;
    Ok((r.value + t, ErrorBudget::new(r.error, te, rounding)))
}

/// `int_R f(s) ds` with a symmetric cutoff and model tails on both sides.
pub fn integrate_line_with<F>(f: &F, model: LineModel, big_s: f64, tol: Tolerance, par: bool) -> Result<(Complex64, ErrorBudget)>
where
    F: Fn(f64) -> Complex64 + Sync,
{
    check_model(model)?;
    let half = geometric_breaks(big_s);
    let mut breaks: Vec<f64> = half.iter().rev().map(|x| -x).collect();
    breaks.extend_from_slice(&half[1..]);
    let r = adaptive(f, &breaks, tol, par)?;
    let (tp, ep) = model_tail(f, model, big_s);
    let mirrored = LineModel { exponent: model.exponent, frequency: -model.frequency };
    let (tm, em) = model_tail(&|s: f64| f(-s), mirrored, big_s);
    let rounding = 4.0 * f64::EPSILON * r.l1;
    Ok((r.value + tp + tm, ErrorBudget::new(r.error, ep + em, rounding)))
}

/// `int_R f(s) ds` with tail model `|s|^p`, `p = spec.decay_exponent`, beyond
/// `S = spec.line_cutoff`.
pub fn integrate_line<F>(f: &F, spec: &QuadSpec) -> Result<(Complex64, ErrorBudget)>
where
    F: Fn(f64) -> Complex64 + Sync,
{
    spec.validate()?;
    integrate_line_with(f, LineModel::algebraic(spec.decay_exponent), spec.line_cutoff, spec.tolerance(), true)
}
