//! Report-producing checks for the gamma function, the Gauss function, the
//! Mellin lemmas, unitarity and the difference operators.

use super::{c, elapsed_ms, tuple_string, VerificationReport};
use crate::diff_ops::{apply_frak_l, frak_l_image, Axis, LatticeFunction, SingularPolicy};
use crate::error::Result;
use crate::field::{field_power_ln, gamma_asymptotic, gamma_field, FieldExponent, SpectralPoint};
use crate::hyper::{f21_direct, f21_gauss_value, f21_mellin_barnes, f21_series, F21Params};
use crate::index::{unitarity_check, KappaReading, WeightParams};
use crate::mellin::{lemma_aux, mellin_f21_pair, mellin_numeric, mellin_power_pair, power_pair_strip, MellinPoint};
use crate::numerics::{ErrorBudget, PlanePoint, QuadSpec, Singularity};
use num_complex::Complex64;
use std::time::Instant;

fn rounding(v: Complex64) -> ErrorBudget {
    ErrorBudget::new(0.0, 0.0, 64.0 * f64::EPSILON * v.norm())
}

/// `G(a|a') G(1-a|1-a') = (-1)^{a'-a}`.
pub fn reflection_check(e: FieldExponent) -> Result<VerificationReport> {
    let start = Instant::now();
    let lhs = (gamma_field(e) * gamma_field(FieldExponent::symmetric(1.0) - e)).value()?;
    let rhs = c(if e.delta % 2 == 0 { 1.0 } else { -1.0 });
    let mut rep = VerificationReport::new("reflection", lhs, rhs, rounding(lhs)).param("e", e);
    rep.wall_ms = elapsed_ms(start);
    Ok(rep)
}

/// `G(k+is|-k+is) G(-k-is|k-is) = 1/((k+is)(k-is))`.
pub fn product_check(pt: SpectralPoint) -> Result<VerificationReport> {
    let start = Instant::now();
    let e = FieldExponent::new(Complex64::new(pt.k as f64, pt.s), 2 * pt.k);
    let lhs = (gamma_field(e) * gamma_field(-e)).value()?;
    let w = Complex64::new(pt.k as f64, pt.s);
    let rhs = 1.0 / (w * w.conj());
    let mut rep = VerificationReport::new("product", lhs, rhs, rounding(lhs)).param("k", pt.k).param("s", pt.s);
    rep.wall_ms = elapsed_ms(start);
    Ok(rep)
}

/// Ratio of `G(base + lambda)` to its leading asymptotic term, against one.
pub fn asymptotic_check(base: FieldExponent, pt: SpectralPoint) -> Result<VerificationReport> {
    let start = Instant::now();
    let exact = gamma_field(base + pt).value()?;
    let lead = gamma_asymptotic(base, pt)?;
    let lhs = exact / lead;
    let mut rep = VerificationReport::new("asymptotic", lhs, c(1.0), rounding(lhs)).param("base", base).param("k", pt.k).param("s", pt.s);
    rep.wall_ms = elapsed_ms(start);
    Ok(rep)
}

fn params_report(rep: VerificationReport, p: &F21Params) -> VerificationReport {
    rep.param("a", p.ea).param("b", p.eb).param("c", p.ec)
}

/// Mellin–Barnes value at `z = 1` against `G(c) G(c-a-b) / (G(c-a) G(c-b))`.
pub fn verify_gauss(p: &F21Params, spec: &QuadSpec) -> Result<VerificationReport> {
    let start = Instant::now();
    let rhs = f21_gauss_value(p)?.value()?;
    let (lhs, budget) = f21_mellin_barnes(p, c(1.0), spec)?;
    let mut rep = params_report(VerificationReport::new("verify-gauss", lhs, rhs, budget), p);
    rep.k_cutoff = spec.lattice_cutoff;
    rep.s_cutoff = spec.line_cutoff;
    rep.wall_ms = elapsed_ms(start);
    Ok(rep)
}

/// Direct plane integral (lhs) against the Mellin–Barnes route (rhs) at `z`.
pub fn verify_f21_routes(p: &F21Params, z: Complex64, spec: &QuadSpec) -> Result<VerificationReport> {
    let start = Instant::now();
    let (lhs, b1) = f21_direct(p, z, spec)?;
    let (rhs, b2) = f21_mellin_barnes(p, z, spec)?;
    let mut rep = params_report(VerificationReport::new("f21-routes", lhs, rhs, b1 + b2), p).param("z", super::fmt_complex(z));
    rep.k_cutoff = spec.lattice_cutoff;
    rep.wall_ms = elapsed_ms(start);
    Ok(rep)
}

/// Numeric transform of `t^p (1-t)^q` against `G(q+1) G(p+xi) / G(p+q+1+xi)`.
pub fn verify_mellin_power(p: FieldExponent, q: FieldExponent, xi: MellinPoint, spec: &QuadSpec) -> Result<VerificationReport> {
    let start = Instant::now();
    let rhs = mellin_power_pair(p, q, xi)?.value()?;
    let one = c(1.0);
    let f = |t: &PlanePoint| {
        let (l1, u1) = field_power_ln(t.z, p);
        let (l2, u2) = field_power_ln(-t.minus(one), q);
        (l1 + l2).exp() * u1 * u2
    };
    let sings = [Singularity::new(c(0.0), 2.0 * p.bracket()), Singularity::new(one, 2.0 * q.bracket())];
    let strip = power_pair_strip(p, q)?;
    let (lhs, budget) = mellin_numeric(&f, &sings, 2.0 * (p.bracket() + q.bracket()), strip, xi, spec)?;
    let mut rep = VerificationReport::new("mellin-power", lhs, rhs, budget)
        .param("p", p)
        .param("q", q)
        .param("l", xi.l)
        .param("tau", super::fmt_complex(xi.tau));
    rep.wall_ms = elapsed_ms(start);
    Ok(rep)
}

/// Numeric transform of `F(a, b; c; t)` against the four-gamma closed form.
pub fn verify_mellin_f21(p: &F21Params, xi: MellinPoint, spec: &QuadSpec) -> Result<VerificationReport> {
    let start = Instant::now();
    let rhs = mellin_f21_pair(p, xi)?.value()?;
    let (a, b, cc) = (p.ea.bracket(), p.eb.bracket(), p.ec.bracket());
    let f = |t: &PlanePoint| f21_series(p, t.z).map(|v| v.0).unwrap_or(Complex64::new(f64::NAN, 0.0));
    let sings = [Singularity::new(c(0.0), (2.0 - 2.0 * cc).min(0.0)), Singularity::new(c(1.0), (2.0 * (cc - a - b)).min(0.0))];
    let strip = p.mellin_strip()?;
    let (lhs, budget) = mellin_numeric(&f, &sings, -2.0 * a.min(b), strip, xi, spec)?;
    let mut rep = params_report(VerificationReport::new("mellin-f21", lhs, rhs, budget), p).param("l", xi.l).param("tau", super::fmt_complex(xi.tau));
    rep.wall_ms = elapsed_ms(start);
    Ok(rep)
}

/// The auxiliary lemma by plane quadrature at one lattice point.
pub fn verify_lemma_aux(a: f64, b: f64, mu: f64, pt: SpectralPoint, spec: &QuadSpec) -> Result<VerificationReport> {
    let start = Instant::now();
    let r = lemma_aux(a, b, mu, pt, spec)?;
    let rhs = r.rhs.value()?;
    let mut rep =
        VerificationReport::new("lemma-aux", r.lhs, rhs, r.budget).param("a", a).param("b", b).param("mu", mu).param("k", pt.k).param("s", pt.s);
    rep.wall_ms = elapsed_ms(start);
    Ok(rep)
}

/// `<J H_mu, J H_nu>_kappa` (lhs) against `<H_mu, H_nu>_rho` (rhs).
pub fn verify_unitarity(a: f64, b: f64, mu: f64, nu: f64, reading: KappaReading, spec: &QuadSpec) -> Result<VerificationReport> {
    let start = Instant::now();
    let w = WeightParams::new(a, b)?;
    let row = unitarity_check(w, mu, nu, reading, spec)?;
    let mut rep = VerificationReport::new("verify-unitarity", row.kappa_side, row.rho_side, row.budget)
        .param("a", a)
        .param("b", b)
        .param("mu", mu)
        .param("nu", nu)
        .param("kappa", reading.name());
    rep.k_cutoff = spec.lattice_cutoff;
    rep.s_cutoff = spec.line_cutoff;
    rep.wall_ms = elapsed_ms(start);
    Ok(rep)
}

/// Commutation of `L_lambda` and `L_lambda'` on `lambda^2 lambda'^3` over a
/// 5x5 window, and annihilation of constants by both. The commutation
/// report compares the two compositions at the worst window point; the
/// constant report has rhs zero and its relative error is taken against
/// the coefficient scale.
pub fn verify_diffops(a: &[Complex64; 4], centre: (Complex64, Complex64)) -> Result<Vec<VerificationReport>> {
    let start = Instant::now();
    let policy = SingularPolicy::Error;
    let phi = LatticeFunction::new(centre, 4, |l, lp| l * l * lp * lp * lp);
    let p_lam = frak_l_image(Axis::Lambda, *a, &phi, policy);
    let p_prime = frak_l_image(Axis::LambdaPrime, *a, &phi, policy);
    let mut worst: Option<(f64, Complex64, Complex64)> = None;
    for m in -2..=2 {
        for n in -2..=2 {
            let (l, lp) = (centre.0 + m as f64, centre.1 + n as f64);
            let ab = apply_frak_l(Axis::LambdaPrime, a, &p_lam, l, lp, policy)?;
            let ba = apply_frak_l(Axis::Lambda, a, &p_prime, l, lp, policy)?;
            let rel = (ab - ba).norm() / ba.norm().max(f64::MIN_POSITIVE);
            if worst.is_none_or(|w| rel > w.0) {
                worst = Some((rel, ab, ba));
            }
        }
    }
    // Constants: the two coefficients cancel, so the natural scale of the
    // residual is the sum of their moduli.
    let one = LatticeFunction::new(centre, 1, |_, _| c(1.0));
    let (mut const_abs, mut coeff_scale) = (0.0f64, 0.0f64);
    for (axis, x) in [(Axis::Lambda, centre.0), (Axis::LambdaPrime, centre.1)] {
        const_abs = const_abs.max(apply_frak_l(axis, a, &one, centre.0, centre.1, policy)?.norm());
        let p = |y: Complex64| a.iter().map(|&aj| aj + y).product::<Complex64>();
        coeff_scale = coeff_scale.max((p(x) / (2.0 * x * (1.0 + 2.0 * x))).norm() + (p(-x) / (2.0 * x * (1.0 - 2.0 * x))).norm());
    }
    let (_, ab, ba) = worst.expect("window is non-empty");
    let tuple = tuple_string(a);
    let mut commute = VerificationReport::new("verify-diffops", ab, ba, rounding(ab)).param("a", &tuple).param("check", "commutation");
    let mut constants =
        VerificationReport::new("verify-diffops", c(const_abs), c(0.0), rounding(c(coeff_scale))).param("a", &tuple).param("check", "constants");
    constants.rel_err = const_abs / coeff_scale;
    constants.extra.insert("coefficient_scale".into(), coeff_scale);
    let ms = elapsed_ms(start);
    commute.wall_ms = ms;
    constants.wall_ms = ms;
    Ok(vec![commute, constants])
}
