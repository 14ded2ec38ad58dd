//! Verifiers for the beta integrals and the generic Barnes–Ismagilov sum-integral.

mod barnes;
mod checks;
mod report;

pub use barnes::{barnes_ismagilov_eval, barnes_ismagilov_exponent, GammaFactorList};
pub use checks::{
    asymptotic_check, product_check, reflection_check, verify_diffops, verify_f21_routes, verify_gauss, verify_lemma_aux, verify_mellin_f21,
    verify_mellin_power, verify_unitarity,
};
pub use report::{fmt_complex, CValue, VerificationReport, ABS_FLOOR};

use crate::error::{Error, Result};
use crate::field::{gamma_field, in_theorem_domain, FieldExponent, GammaValue};
use crate::lgamma::{gamma, ln_gamma, nonpositive_integer};
use crate::numerics::{
    integrate_half_line, sum_bilateral_with, sum_integral_lattice_with, BilateralModel, ErrorBudget, KTail, LatticeModel, LineModel, QuadSpec,
};
use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::atomic::{AtomicBool, Ordering};
use std::time::Instant;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn elapsed_ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

fn canonical(a: &[Complex64; 4]) -> [Complex64; 4] {
    let mut s = *a;
    s.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
    s
}

fn tuple_string(a: &[Complex64]) -> String {
    a.iter().map(|&x| fmt_complex(x)).collect::<Vec<_>>().join(",")
}

/// Right-hand side shared by the main and Wilson-type identities:
/// `prod_{i<j} G(a_i + a_j) / G(sum a)` for a gamma-like `G`.
fn pair_product<G: Fn(Complex64) -> GammaValue>(a: &[Complex64; 4], g: G) -> GammaValue {
    let mut v = GammaValue::one();
    for i in 0..4 {
        for j in i + 1..4 {
            v = v * g(a[i] + a[j]);
        }
    }
    v / g(a.iter().sum())
}

/// `prod_{i<j} G^C(a_i+a_j) / G^C(sum a)` with diagonal parameters.
pub fn main_rhs(a: &[Complex64; 4]) -> GammaValue {
    pair_product(a, |x| gamma_field(FieldExponent::diag(x)))
}

/// The main integrand without the prefactor, at `lambda = (k + is)/2`:
/// `(k^2+s^2) prod_j G^C(a_j+lambda|a_j+lambda') G^C(a_j+conj lambda|a_j-lambda)`.
///
/// For real `a` this is a squared modulus; in general it equals
/// `(k^2+s^2) prod_j R_j(lambda) R_j(conj lambda)` with
/// `R_j(w) = Gamma(a_j+w)/Gamma(1-a_j+w)` (the signs `(-1)^k` cancel in pairs).
pub fn main_integrand(a: &[Complex64; 4], k: i64, s: f64) -> Complex64 {
    let lam = Complex64::new(0.5 * k as f64, 0.5 * s);
    let r = |w: Complex64| -> Complex64 { a.iter().map(|&x| ln_gamma(x + w) - ln_gamma(1.0 - x + w)).sum() };
    let w = (k * k) as f64 + s * s;
    if w == 0.0 {
        return c(0.0);
    }
    if a.iter().all(|x| x.im == 0.0) {
        c(w * (2.0 * r(lam).re).exp())
    } else {
        w * (r(lam) + r(lam.conj())).exp()
    }
}

/// Decay exponent of the main integrand: `|F| ~ |k+is|^{4 sum a - 6}`.
pub fn main_decay_exponent(a: &[Complex64; 4]) -> Complex64 {
    4.0 * a.iter().sum::<Complex64>() - 6.0
}

/// Checks `(1/8 pi) sum_k int F ds = prod G^C(a_i+a_j)/G^C(sum a)`.
///
/// The prefactor printed alongside the theorem is `1/(4 pi^2)`; the report
/// records the ratio `rhs / lhs_printed = pi/2` under `printed_prefactor_ratio`.
pub fn verify_main(a: &[Complex64; 4], spec: &QuadSpec) -> Result<VerificationReport> {
    spec.validate()?;
    if !in_theorem_domain(a) {
        return Err(Error::Domain(format!("need Re a_j > 0 and Re sum a_j < 1, got ({})", tuple_string(a))));
    }
    let start = Instant::now();
    let a = canonical(a);
    let rhs = main_rhs(&a).value()?;
    let real = a.iter().all(|x| x.im == 0.0);
    let negative = AtomicBool::new(false);
    let f = |k: i64, s: f64| {
        let v = main_integrand(&a, k, s);
        if real && !(v.re >= 0.0) {
            negative.store(true, Ordering::Relaxed);
        }
        v
    };
    let exponent = main_decay_exponent(&a);
    let model = LatticeModel { exponent, line_frequency: 0.0, k_tail: KTail::Fit { step: 2, terms: 4 }, even_k: true, even_s: true };
    let r = sum_integral_lattice_with(&f, &model, spec)?;
    if negative.load(Ordering::Relaxed) {
        return Err(Error::Domain("integrand took a negative or non-finite value for real parameters".into()));
    }
    let pre = 1.0 / (8.0 * PI);
    let lhs = r.value * pre;
    let mut rep = VerificationReport::new("verify-main", lhs, rhs, r.budget.scaled(pre)).param("a", tuple_string(&a));
    rep.k_cutoff = r.k_max;
    rep.s_cutoff = r.s_max;
    let printed = r.value / (4.0 * PI * PI);
    rep.extra.insert("printed_prefactor_ratio".into(), rhs.norm() / printed.norm());
    rep.extra.insert("decay_exponent".into(), exponent.re);
    rep.extra.insert("printed_decay_exponent".into(), 2.0 * a.iter().map(|x| x.re).sum::<f64>() - 8.0);
    rep.notes.push(format!("integrand form: {}", if real { "squared modulus" } else { "holomorphic product" }));
    rep.wall_ms = elapsed_ms(start);
    Ok(rep)
}

/// `ln sinh x` for `x > 0`.
fn ln_sinh(x: f64) -> f64 {
    x + (-(-2.0 * x).exp_m1()).ln() - std::f64::consts::LN_2
}

/// Wilson integrand `prod Gamma(a+is)Gamma(a-is) * 2 s sinh(2 pi s)/pi`, `s >= 0`.
pub fn wilson_integrand(a: &[Complex64; 4], s: f64) -> Complex64 {
    if s == 0.0 {
        return c(0.0);
    }
    let is = Complex64::new(0.0, s);
    let g: Complex64 = a.iter().map(|&x| ln_gamma(x + is) + ln_gamma(x - is)).sum();
    (g + (2.0 * s).ln() + ln_sinh(2.0 * PI * s) - PI.ln()).exp()
}

/// Checks `(1/4 pi) int |prod Gamma(a+is)/Gamma(2is)|^2 ds = prod Gamma(a_i+a_j)/Gamma(sum a)`.
pub fn verify_wilson(a: &[Complex64; 4], spec: &QuadSpec) -> Result<VerificationReport> {
    spec.validate()?;
    if a.iter().any(|x| x.re <= 0.0) {
        return Err(Error::Domain(format!("need Re a_j > 0, got ({})", tuple_string(a))));
    }
    let start = Instant::now();
    let a = canonical(a);
    let rhs = pair_product(&a, |x| match nonpositive_integer(x, 1e-12) {
        Some(_) => GammaValue::Pole { at: x },
        None => GammaValue::from_ln(ln_gamma(x), 0),
    })
    .value()?;
    let f = |s: f64| wilson_integrand(&a, s);
    // Exponential decay like s^{4 Re sum a - 2} e^{-2 pi s}.
    let growth = (4.0 * a.iter().map(|x| x.re).sum::<f64>()).max(1.0);
    let big_s = (40.0 + 2.0 * growth).min(spec.line_cutoff.max(40.0));
    let (v, b) = integrate_half_line(&f, LineModel::algebraic(-2.0), big_s, spec.tolerance(), true)?;
    let pre = 2.0 / (4.0 * PI);
    let mut rep = VerificationReport::new("verify-wilson", v * pre, rhs, b.scaled(pre)).param("a", tuple_string(&a));
    rep.s_cutoff = big_s;
    rep.wall_ms = elapsed_ms(start);
    Ok(rep)
}

/// Dougall term `(k+theta) / prod Gamma(b+theta+k) Gamma(b-theta-k)`, exactly
/// zero where a gamma argument is a nonpositive integer.
pub fn dougall_term(b: &[Complex64; 4], theta: f64, k: i64) -> Complex64 {
    let t = theta + k as f64;
    let mut ln = c(0.0);
    for &x in b {
        for arg in [x + t, x - t] {
            if nonpositive_integer(arg, 1e-12).is_some() {
                return c(0.0);
            }
            ln -= ln_gamma(arg);
        }
    }
    t * ln.exp()
}

/// Rounding of one term: each `ln Gamma` carries an absolute error of a few
/// ulps of its size, and the exponential turns that into a relative error.
fn dougall_term_rounding(b: &[Complex64; 4], theta: f64, k: i64) -> f64 {
    let t = theta + k as f64;
    let logs: f64 =
        b.iter().flat_map(|&x| [x + t, x - t]).filter(|&a| nonpositive_integer(a, 1e-12).is_none()).map(|a| ln_gamma(a).norm() + 1.0).sum();
    4.0 * f64::EPSILON * logs * dougall_term(b, theta, k).norm()
}

/// The same estimate for the seven gamma values of the closed form.
fn dougall_rhs_rounding(b: &[Complex64; 4], rhs: Complex64) -> f64 {
    let sum: Complex64 = b.iter().sum();
    let mut logs = ln_gamma(sum - 3.0).norm() + 1.0;
    for i in 0..4 {
        for j in i + 1..4 {
            logs += ln_gamma(b[i] + b[j] - 1.0).norm() + 1.0;
        }
    }
    4.0 * f64::EPSILON * logs * rhs.norm()
}

/// `(sin 2 pi theta / 2 pi) Gamma(sum b - 3) / prod_{i<j} Gamma(b_i+b_j-1)`.
pub fn dougall_rhs(b: &[Complex64; 4], theta: f64) -> Result<Complex64> {
    let mut den = c(1.0);
    for i in 0..4 {
        for j in i + 1..4 {
            den *= gamma(b[i] + b[j] - 1.0);
        }
    }
    let sum: Complex64 = b.iter().sum();
    if nonpositive_integer(sum - 3.0, 1e-12).is_some() {
        return Err(Error::Pole(format!("Gamma(sum b - 3) at sum b = {}", fmt_complex(sum))));
    }
    Ok((2.0 * PI * theta).sin() / (2.0 * PI) * gamma(sum - 3.0) / den)
}

/// Checks the bilateral sum `sum_k (k+theta)/prod Gamma(b+theta+k)Gamma(b-theta-k)`
/// against its closed form. Terms decay like `|k|^{5 - 2 sum b}`.
pub fn verify_dougall(b: &[Complex64; 4], theta: f64, spec: &QuadSpec) -> Result<VerificationReport> {
    spec.validate()?;
    let sum: Complex64 = b.iter().sum();
    if sum.re <= 3.0 {
        return Err(Error::Domain(format!("need Re sum b > 3, got {}", sum.re)));
    }
    let start = Instant::now();
    let b = canonical(b);
    let rhs = dougall_rhs(&b, theta)?;
    let term = |k: i64| dougall_term(&b, theta, k);
    let terms = if sum.re > 3.5 { 5 } else { 4 };
    let model = BilateralModel { exponent: 5.0 - 2.0 * sum, tail: KTail::Fit { step: 1, terms } };
    let (lhs, mut budget) = sum_bilateral_with(&term, &model, spec)?;
    budget.rounding_estimate +=
        (-spec.lattice_cutoff..=spec.lattice_cutoff).map(|k| dougall_term_rounding(&b, theta, k)).sum::<f64>() + dougall_rhs_rounding(&b, rhs);
    let mut rep = VerificationReport::new("verify-dougall", lhs, rhs, budget).param("b", tuple_string(&b)).param("theta", theta);
    rep.k_cutoff = spec.lattice_cutoff;
    rep.wall_ms = elapsed_ms(start);
    Ok(rep)
}

/// Compares `Gamma(2is)Gamma(-2is)` at `s = i(theta+k)` with the reflection
/// value `-pi/(2(theta+k) sin 2 pi theta)` (lhs vs rhs) and with the
/// printed display `-4 pi (theta+k)/sin 2 pi theta` (stored in `extra`).
pub fn bridge_check(theta: f64, k: i64) -> Result<VerificationReport> {
    if (2.0 * theta - (2.0 * theta).round()).abs() < 1e-12 {
        return Err(Error::Domain(format!("theta must avoid Z/2, got {theta}")));
    }
    let start = Instant::now();
    let t = theta + k as f64;
    let z = c(-2.0 * t);
    let direct = gamma(z) * gamma(-z);
    let reflection = -PI / (z * (PI * z).sin());
    let sin2 = (2.0 * PI * theta).sin();
    let oracle = c(-PI / (2.0 * t * sin2));
    let printed = c(-4.0 * PI * t / sin2);
    let mut rep = VerificationReport::new("bridge", direct, oracle, ErrorBudget::new(0.0, 0.0, 64.0 * f64::EPSILON * direct.norm()))
        .param("theta", theta)
        .param("k", k);
    let rel = |x: Complex64, y: Complex64| (x - y).norm() / y.norm().max(ABS_FLOOR);
    rep.extra.insert("reflection_rel_err".into(), rel(direct, reflection));
    rep.extra.insert("printed_value".into(), printed.re);
    rep.extra.insert("printed_rel_err".into(), rel(printed, direct));
    let inconsistent = rel(printed, direct) > 1e-6;
    rep.extra.insert("printed_inconsistent".into(), if inconsistent { 1.0 } else { 0.0 });
    if inconsistent {
        rep.notes.push(format!("display -4 pi (theta+k)/sin(2 pi theta) = {} disagrees with the reflection value {}", printed.re, oracle.re));
    }
    rep.wall_ms = elapsed_ms(start);
    Ok(rep)
}
