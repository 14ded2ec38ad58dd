//! Mellin transform on the punctured plane, its inversion and the Parseval
//! pairing, with the auxiliary lemma behind the index transform.
//!
//! With the normalised measure `d^2 t / pi`:
//!
//! * `M f(xi) = (1/pi) int t^{xi-1|xi'-1} f(t) d^2 t`;
//! * `f(t) = (1/4pi) sum_l int M f(xi) t^{-xi|-xi'} dy`, `tau = gamma + i y`;
//! * `(1/pi) int f1 f2 |t|^{-2} d^2 t = (1/4pi) sum_l int M f1(-xi) M f2(xi) dy`.

use crate::error::{Error, Result};
use crate::field::{field_power_ln, gamma_field, FieldExponent, GammaValue, SpectralPoint};
use crate::hyper::{f21_direct_opts, f21_field, kernel_params, F21Method, F21Params};
use crate::numerics::{
    integrate_plane_with, sum_integral_lattice_with, ErrorBudget, KTail, LatticeModel, PlaneOptions, PlanePoint, QuadSpec, Singularity,
};
use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::Mutex;

/// `xi|xi' = (l + tau)/2 | (-l + tau)/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MellinPoint {
    pub l: i64,
    pub tau: Complex64,
}

impl MellinPoint {
    pub fn new(l: i64, tau: Complex64) -> Self {
        Self { l, tau }
    }

    pub fn exponent(&self) -> FieldExponent {
        FieldExponent::new(0.5 * (self.l as f64 + self.tau), self.l)
    }

    /// `[xi|xi'] = Re tau / 2`.
    pub fn bracket(&self) -> f64 {
        0.5 * self.tau.re
    }

    /// `-xi | -xi'`.
    pub fn neg(&self) -> Self {
        Self::new(-self.l, -self.tau)
    }
}

fn in_strip(x: f64, strip: (f64, f64)) -> bool {
    strip.0 < x && x < strip.1
}

fn strip_error(what: &str, x: f64, strip: (f64, f64)) -> Error {
    Error::Domain(format!("{what} = {x} outside the strip ({}, {})", strip.0, strip.1))
}

/// `M f(xi)` by plane quadrature. `local` lists the singular points of `f`
/// with their exponents; the power `t^{xi-1}` is added at the origin.
/// `infinity_exponent` is the decay of `f` alone; `strip` bounds `[xi]`.
pub fn mellin_numeric<F>(
    f: &F,
    local: &[Singularity],
    infinity_exponent: f64,
    strip: (f64, f64),
    xi: MellinPoint,
    spec: &QuadSpec,
) -> Result<(Complex64, ErrorBudget)>
where
    F: Fn(&PlanePoint) -> Complex64 + Sync,
{
    let br = xi.bracket();
    if !in_strip(br, strip) {
        return Err(strip_error("[xi]", br, strip));
    }
    let zero = Complex64::new(0.0, 0.0);
    let shift = 2.0 * br - 2.0;
    let mut sings: Vec<Singularity> = local.to_vec();
    match sings.iter_mut().find(|s| s.point == zero) {
        Some(s) => s.exponent += shift,
        None => sings.push(Singularity::new(zero, shift)),
    }
    let e = xi.exponent() - 1.0;
    let g = |p: &PlanePoint| {
        let (l, u) = field_power_ln(p.z, e);
        l.exp() * u * f(p)
    };
    let opts = PlaneOptions { infinity_exponent: infinity_exponent + shift, parallel: true };
    let (v, b) = integrate_plane_with(&g, &sings, opts, spec)?;
    Ok((v / PI, b.scaled(1.0 / PI)))
}

/// Strip `-[p] < [xi] < -[p] - [q]` of the transform of `t^p (1-t)^q`.
pub fn power_pair_strip(p: FieldExponent, q: FieldExponent) -> Result<(f64, f64)> {
    let lo = -p.bracket();
    let hi = -p.bracket() - q.bracket();
    if !(lo < hi) {
        return Err(Error::EmptyStrip(format!("need [q] < 0, got [q] = {}", q.bracket())));
    }
    Ok((lo, hi))
}

/// Transform of `t^{p|p'} (1-t)^{q|q'}`:
/// `G^C(q+1) G^C(p+xi) / G^C(p+q+1+xi)`.
pub fn mellin_power_pair(p: FieldExponent, q: FieldExponent, xi: MellinPoint) -> Result<GammaValue> {
    let strip = power_pair_strip(p, q)?;
    if !in_strip(xi.bracket(), strip) {
        return Err(strip_error("[xi]", xi.bracket(), strip));
    }
    let x = xi.exponent();
    Ok(gamma_field(q + 1.0) * gamma_field(p + x) / gamma_field(p + q + 1.0 + x))
}

/// Transform of `F(a, b; c; t)`:
/// `G^C(xi) G^C(a-xi) G^C(b-xi) G^C(1-c+xi) / (G^C(a) G^C(b) G^C(1-c))`.
pub fn mellin_f21_pair(p: &F21Params, xi: MellinPoint) -> Result<GammaValue> {
    let strip = p.mellin_strip()?;
    if !in_strip(xi.bracket(), strip) {
        return Err(strip_error("[xi]", xi.bracket(), strip));
    }
    let x = xi.exponent();
    let one = FieldExponent::symmetric(1.0);
    let num = gamma_field(x) * gamma_field(p.ea - x) * gamma_field(p.eb - x) * gamma_field(one - p.ec + x);
    Ok(num / (gamma_field(p.ea) * gamma_field(p.eb) * gamma_field(one - p.ec)))
}

fn contour_model(exponent: Complex64, frequency: f64, on_circle: bool) -> LatticeModel {
    let k_tail = if on_circle { KTail::Fit { step: 1, terms: 4 } } else { KTail::Geometric };
    LatticeModel { exponent, line_frequency: frequency, k_tail, even_k: false, even_s: false }
}

/// `f(t) = (1/4pi) sum_l int M(xi) t^{-xi|-xi'} dy` along `Re tau = gamma_line`.
/// `decay` is the joint exponent `|M(xi)| ~ |xi|^decay`.
pub fn mellin_inverse<M>(m: &M, gamma_line: f64, decay: Complex64, t: Complex64, spec: &QuadSpec) -> Result<(Complex64, ErrorBudget)>
where
    M: Fn(MellinPoint) -> Complex64 + Sync,
{
    if t == Complex64::new(0.0, 0.0) {
        return Err(Error::Domain("inversion needs t != 0".into()));
    }
    let ln_r = t.norm().ln();
    let unit = t / t.norm();
    let g = |l: i64, y: f64| {
        let xi = MellinPoint::new(l, Complex64::new(gamma_line, y));
        m(xi) * (-xi.tau * ln_r).exp() * unit.powi(-(l as i32))
    };
    let on_circle = ln_r.abs() < 1e-12;
    let mut spec = *spec;
    if !on_circle {
        spec.line_cutoff = spec.line_cutoff.min((60.0 / ln_r.abs()).max(200.0));
    }
    let r = sum_integral_lattice_with(&g, &contour_model(decay, -ln_r, on_circle), &spec)?;
    Ok((r.value / (4.0 * PI), r.budget.scaled(1.0 / (4.0 * PI))))
}

/// `(1/4pi) sum_l int M1(-xi) M2(xi) dy` along `Re tau = gamma_line`.
///
/// `strip1` and `strip2` are the holomorphy strips of `M1` and `M2` in their
/// own arguments, so `[xi] = gamma_line/2` must lie in `-strip1` and `strip2`.
/// `decay` is the joint exponent of the product.
pub fn parseval_pair<M1, M2>(
    m1: &M1,
    m2: &M2,
    strip1: (f64, f64),
    strip2: (f64, f64),
    gamma_line: f64,
    decay: Complex64,
    spec: &QuadSpec,
) -> Result<(Complex64, ErrorBudget)>
where
    M1: Fn(MellinPoint) -> Complex64 + Sync,
    M2: Fn(MellinPoint) -> Complex64 + Sync,
{
    let lo = strip2.0.max(-strip1.1);
    let hi = strip2.1.min(-strip1.0);
    if !(lo < hi) {
        return Err(Error::EmptyStrip(format!("strips ({}, {}) and -({}, {}) do not meet", strip2.0, strip2.1, strip1.0, strip1.1)));
    }
    let br = 0.5 * gamma_line;
    if !in_strip(br, (lo, hi)) {
        return Err(strip_error("[xi]", br, (lo, hi)));
    }
    if !(decay.re < -2.0) {
        return Err(Error::NonDecay(format!("joint decay exponent {} must be below -2", decay.re)));
    }
    let g = |l: i64, y: f64| {
        let xi = MellinPoint::new(l, Complex64::new(gamma_line, y));
        m1(xi.neg()) * m2(xi)
    };
    let r = sum_integral_lattice_with(&g, &contour_model(decay, 0.0, true), spec)?;
    Ok((r.value / (4.0 * PI), r.budget.scaled(1.0 / (4.0 * PI))))
}

/// Strip of the transform of `t^{a+b} (1-t)^{-b-mu}`: `-a-b < [xi] < mu-a`.
pub fn strip1(a: f64, b: f64, mu: f64) -> (f64, f64) {
    (-a - b, mu - a)
}

/// Strip of the transform of the kernel hypergeometric function:
/// `max(0, a+b-1) < [xi] < a`.
pub fn strip2(a: f64, b: f64) -> (f64, f64) {
    (0f64.max(a + b - 1.0), a)
}

/// `a > 0, b > 0, mu > 0, a + mu < 1, b + mu < 1`.
pub fn lemma_aux_domain(a: f64, b: f64, mu: f64) -> Result<()> {
    if a > 0.0 && b > 0.0 && mu > 0.0 && a + mu < 1.0 && b + mu < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("need a, b, mu > 0 and a + mu, b + mu < 1; got a={a}, b={b}, mu={mu}")))
    }
}

/// `G^C(a+b) G^C(mu+lambda) G^C(mu-lambda) / (G^C(a+mu) G^C(b+mu))`.
pub fn lemma_aux_rhs(a: f64, b: f64, mu: f64, pt: SpectralPoint) -> GammaValue {
    let e = FieldExponent::symmetric;
    gamma_field(e(a + b)) * gamma_field(e(mu) + pt) * gamma_field(e(mu) - pt) / (gamma_field(e(a + mu)) * gamma_field(e(b + mu)))
}

/// Both sides of the auxiliary lemma.
#[derive(Debug, Clone, Copy)]
pub struct LemmaAux {
    pub lhs: Complex64,
    pub budget: ErrorBudget,
    pub rhs: GammaValue,
}

/// `(1/pi) int z^{a+b-1}(1-z)^{-b-mu} F(a+lambda, a-lambda; a+b; z) d^2 z`
/// by plane quadrature, with `F` from the series route.
pub fn lemma_aux(a: f64, b: f64, mu: f64, pt: SpectralPoint, spec: &QuadSpec) -> Result<LemmaAux> {
    lemma_aux_with(a, b, mu, pt, F21Method::Series, spec, spec)
}

/// [`lemma_aux`] with a chosen route for `F`; `inner` is passed to it.
pub fn lemma_aux_with(a: f64, b: f64, mu: f64, pt: SpectralPoint, method: F21Method, spec: &QuadSpec, inner: &QuadSpec) -> Result<LemmaAux> {
    lemma_aux_domain(a, b, mu)?;
    let params = kernel_params(a, b, pt);
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let e1 = FieldExponent::symmetric(a + b - 1.0);
    let e2 = FieldExponent::symmetric(-b - mu);
    let failure: Mutex<Option<Error>> = Mutex::new(None);
    let f = |p: &PlanePoint| {
        let (l1, _) = field_power_ln(p.z, e1);
        let (l2, _) = field_power_ln(-p.minus(one), e2);
        let v = match method {
            F21Method::Direct => f21_direct_opts(&params, p.z, inner, false),
            _ => f21_field(&params, p.z, method, inner),
        };
        match v {
            Ok((v, _)) => (l1 + l2).exp() * v,
            Err(e) => {
                failure.lock().unwrap().get_or_insert(e);
                zero
            }
        }
    };
    let at_one = -2.0 * b - 2.0 * mu + (2.0 * (b - a)).min(0.0);
    let sings = [Singularity::new(zero, 2.0 * (a + b) - 2.0), Singularity::new(one, at_one)];
    let opts = PlaneOptions { infinity_exponent: -2.0 - 2.0 * mu, parallel: true };
    let (v, budget) = integrate_plane_with(&f, &sings, opts, spec)?;
    if let Some(e) = failure.into_inner().unwrap() {
        return Err(e);
    }
    Ok(LemmaAux { lhs: v / PI, budget: budget.scaled(1.0 / PI), rhs: lemma_aux_rhs(a, b, mu, pt) })
}

/// The left side of the lemma through [`parseval_pair`], pairing the power
/// `t^{a+b}(1-t)^{-b-mu}` with the kernel hypergeometric function.
pub fn lemma_aux_parseval(a: f64, b: f64, mu: f64, pt: SpectralPoint, gamma_line: f64, spec: &QuadSpec) -> Result<(Complex64, ErrorBudget)> {
    lemma_aux_domain(a, b, mu)?;
    let params = kernel_params(a, b, pt);
    let p = FieldExponent::symmetric(a + b);
    let q = FieldExponent::symmetric(-b - mu);
    let m1 = |xi: MellinPoint| mellin_power_pair(p, q, xi).and_then(|g| g.value()).unwrap_or(Complex64::new(f64::NAN, 0.0));
    let m2 = |xi: MellinPoint| mellin_f21_pair(&params, xi).and_then(|g| g.value()).unwrap_or(Complex64::new(f64::NAN, 0.0));
    let decay = Complex64::new(2.0 * a + 2.0 * mu - 4.0, 0.0);
    parseval_pair(&m1, &m2, strip1(a, b, mu), strip2(a, b), gamma_line, decay, spec)
}
