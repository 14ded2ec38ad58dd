//! The Gauss hypergeometric function of the complex field.
//!
//! Two independent routes:
//!
//! * direct: `F(z) = (1/pi) int t^{b-1}(1-t)^{c-b-1}(1-zt)^{-a} d^2t / B(b, c-b)`;
//! * Mellin–Barnes: `F(z) = (1/4pi) sum_l int dy  M(xi) z^{-xi|-xi'}` along
//!   `xi = (l + tau)/2`, `tau = 2 gamma + i y`, with
//!   `M(xi) = G(xi) G(a-xi) G(b-xi) G(1-c+xi) / (G(a) G(b) G(1-c))`.
//!
//! A third, fast route sums the residues of the Mellin–Barnes integrand at
//! the poles of `G(xi)` and `G(1-c+xi)`, which gives
//!
//! ```text
//! F(z) = 2F1(a, b; c; z) 2F1(a', b'; c'; conj z)
//!      + K z^{1-c|1-c'} 2F1(1+a-c, 1+b-c; 2-c; z) 2F1(1+a'-c', 1+b'-c'; 2-c'; conj z),
//! K = G(c-1) G(1+a-c) G(1+b-c) / (G(a) G(b) G(1-c)).
//! ```
//!
//! The sum is single-valued, so it holds on the whole plane with principal
//! branches of the classical functions. For large `|z|` the residues at the
//! poles of `G(a-xi)` and `G(b-xi)` are summed instead.

use crate::classical::hyp2f1_side;
use crate::error::{Error, Result};
use crate::field::{beta_field, field_power_ln, gamma_field, FieldExponent, GammaValue, SpectralPoint};
use crate::numerics::{
    integrate_plane_with, sum_integral_lattice_with, ErrorBudget, KTail, LatticeModel, PlaneOptions, PlanePoint, QuadSpec, Singularity,
};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Parameters `a|a'`, `b|b'` (upper) and `c|c'` (lower).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct F21Params {
    pub ea: FieldExponent,
    pub eb: FieldExponent,
    pub ec: FieldExponent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum F21Method {
    Direct,
    MellinBarnes,
    /// Bilinear combination of classical functions; needs `c` off the integers.
    Series,
}

impl F21Params {
    pub fn new(ea: FieldExponent, eb: FieldExponent, ec: FieldExponent) -> Self {
        Self { ea, eb, ec }
    }

    /// All three parameters diagonal and real.
    pub fn real(a: f64, b: f64, c: f64) -> Self {
        Self::new(FieldExponent::symmetric(a), FieldExponent::symmetric(b), FieldExponent::symmetric(c))
    }

    pub fn swapped(&self) -> Self {
        Self::new(self.eb, self.ea, self.ec)
    }

    /// Convergence domain of the Euler-type integral.
    pub fn check_direct(&self) -> Result<()> {
        let (a, b, c) = (self.ea.bracket(), self.eb.bracket(), self.ec.bracket());
        let cb = (self.ec - self.eb).bracket();
        if !(b > 0.0) {
            return Err(Error::Domain(format!("direct route needs [b] > 0, got {b}")));
        }
        if !(cb > 0.0) {
            return Err(Error::Domain(format!("direct route needs [c-b] > 0, got {cb}")));
        }
        if !(a < 1.0) {
            return Err(Error::Domain(format!("direct route needs [a] < 1, got {a}")));
        }
        if !(c - a < 1.0) {
            return Err(Error::Domain(format!("direct route needs [c]-[a] < 1, got {}", c - a)));
        }
        Ok(())
    }

    /// Strip `max(0, [c]-1) < [xi] < min([a], [b])` of the Mellin transform.
    pub fn mellin_strip(&self) -> Result<(f64, f64)> {
        let (a, b, c) = (self.ea.bracket(), self.eb.bracket(), self.ec.bracket());
        if !(c - a - b > -1.0) {
            return Err(Error::EmptyStrip(format!("[c]-[a]-[b] = {} must exceed -1", c - a - b)));
        }
        let lo = 0f64.max(c - 1.0);
        let hi = a.min(b);
        if !(lo < hi) {
            return Err(Error::EmptyStrip(format!("max(0, [c]-1) = {lo} is not below min([a], [b]) = {hi}")));
        }
        Ok((lo, hi))
    }

    /// Condition `[c] > [a] + [b]` for continuity at `z = 1`.
    pub fn gauss_condition(&self) -> bool {
        self.ec.bracket() > self.ea.bracket() + self.eb.bracket()
    }

    /// Local exponents of the Euler integrand `|t - t0|^sigma` at `0, 1, 1/z`,
    /// and the decay exponent at infinity.
    pub fn euler_exponents(&self, z: Complex64) -> (Vec<Singularity>, f64) {
        let (a, b, c) = (self.ea.bracket(), self.eb.bracket(), self.ec.bracket());
        let cb = (self.ec - self.eb).bracket();
        let zero = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        let mut s = vec![Singularity::new(zero, 2.0 * b - 2.0)];
        if z == one {
            s.push(Singularity::new(one, 2.0 * cb - 2.0 - 2.0 * a));
        } else {
            s.push(Singularity::new(one, 2.0 * cb - 2.0));
            if z != zero {
                s.push(Singularity::new(1.0 / z, -2.0 * a));
            }
        }
        (s, 2.0 * c - 2.0 * a - 4.0)
    }
}

/// Evaluates `F(z)` by the chosen route.
pub fn f21_field(p: &F21Params, z: Complex64, method: F21Method, spec: &QuadSpec) -> Result<(Complex64, ErrorBudget)> {
    match method {
        F21Method::Direct => f21_direct(p, z, spec),
        F21Method::MellinBarnes => f21_mellin_barnes(p, z, spec),
        F21Method::Series => f21_series(p, z),
    }
}

/// Series route: the bilinear classical expression in the module docs,
/// or for `|z| > 2` its counterpart at infinity.
pub fn f21_series(p: &F21Params, z: Complex64) -> Result<(Complex64, ErrorBudget)> {
    if z.norm() > INFINITY_SWITCH {
        if let Some(r) = f21_series_infinity(p, z)? {
            return Ok(r);
        }
    }
    f21_series_zero(p, z)
}

/// Beyond this radius the expansion at infinity is preferred: for integer
/// parameter shifts the classical factors at zero grow like powers of `|z|`
/// that cancel in the sum.
const INFINITY_SWITCH: f64 = 2.0;

fn finite_value(g: GammaValue) -> Option<Complex64> {
    match g {
        GammaValue::Finite { .. } | GammaValue::Zero { .. } => g.value().ok(),
        _ => None,
    }
}

fn f21_series_zero(p: &F21Params, z: Complex64) -> Result<(Complex64, ErrorBudget)> {
    let one = FieldExponent::symmetric(1.0);
    let (a, b, c) = (p.ea, p.eb, p.ec);
    let k = gamma_field(c - 1.0) * gamma_field(one + a - c) * gamma_field(one + b - c) / (gamma_field(a) * gamma_field(b) * gamma_field(one - c));
    let Some(k) = finite_value(k) else {
        return Err(Error::Pole(format!("series route needs c off the integers, got {c}")));
    };
    let zero = Complex64::new(0.0, 0.0);
    // On the cut z is read as z + i0, so conj z is conj z - i0.
    let zc = Complex64::new(z.re, -z.im);
    let h = |a: Complex64, b: Complex64, c: Complex64, w: Complex64, below: bool| hyp2f1_side(a, b, c, w, below);
    let first = h(a.a, b.a, c.a, z, false)? * h(a.a_prime(), b.a_prime(), c.a_prime(), zc, true)?;
    let second = if z == zero {
        if c.bracket() >= 1.0 {
            return Err(Error::Domain("series route at z = 0 needs [c] < 1".into()));
        }
        zero
    } else {
        let d = one - c;
        let (l, u) = field_power_ln(z, d);
        k * (l.exp() * u)
            * h(1.0 + a.a - c.a, 1.0 + b.a - c.a, 2.0 - c.a, z, false)?
            * h(1.0 + a.a_prime() - c.a_prime(), 1.0 + b.a_prime() - c.a_prime(), 2.0 - c.a_prime(), zc, true)?
    };
    let v = first + second;
    let rounding = 1e-13 * (first.norm() + second.norm());
    Ok((v, ErrorBudget::new(0.0, 0.0, rounding)))
}

/// Residues at the poles of `G(a-xi)` and `G(b-xi)`:
///
/// ```text
/// F(z) = sum over (a, b), (b, a) of
///        G(b-a) G(1-c+a) / (G(b) G(1-c)) z^{-a|-a'}
///        2F1(a, 1+a-c; 1+a-b; 1/z) 2F1(a', 1+a'-c'; 1+a'-b'; 1/conj z).
/// ```
///
/// `None` when `a - b` is an integer exponent, where the coefficients have poles.
fn f21_series_infinity(p: &F21Params, z: Complex64) -> Result<Option<(Complex64, ErrorBudget)>> {
    let one = FieldExponent::symmetric(1.0);
    let (a, b, c) = (p.ea, p.eb, p.ec);
    let coeff =
        |a: FieldExponent, b: FieldExponent| finite_value(gamma_field(b - a) * gamma_field(one - c + a) / (gamma_field(b) * gamma_field(one - c)));
    let (Some(ka), Some(kb)) = (coeff(a, b), coeff(b, a)) else {
        return Ok(None);
    };
    let w = 1.0 / z;
    let wc = Complex64::new(w.re, -w.im);
    let term = |k: Complex64, a: FieldExponent, b: FieldExponent| -> Result<Complex64> {
        let (l, u) = field_power_ln(z, -a);
        let f1 = hyp2f1_side(a.a, 1.0 + a.a - c.a, 1.0 + a.a - b.a, w, false)?;
        let f2 = hyp2f1_side(a.a_prime(), 1.0 + a.a_prime() - c.a_prime(), 1.0 + a.a_prime() - b.a_prime(), wc, true)?;
        Ok(k * (l.exp() * u) * f1 * f2)
    };
    let t1 = term(ka, a, b)?;
    let t2 = term(kb, b, a)?;
    let v = t1 + t2;
    Ok(Some((v, ErrorBudget::new(0.0, 0.0, 1e-13 * (t1.norm() + t2.norm())))))
}

/// Direct route; the integral is evaluated with [`integrate_plane_with`].
pub fn f21_direct(p: &F21Params, z: Complex64, spec: &QuadSpec) -> Result<(Complex64, ErrorBudget)> {
    f21_direct_opts(p, z, spec, true)
}

pub(crate) fn f21_direct_opts(p: &F21Params, z: Complex64, spec: &QuadSpec, parallel: bool) -> Result<(Complex64, ErrorBudget)> {
    p.check_direct()?;
    if z == Complex64::new(0.0, 0.0) {
        return Ok((Complex64::new(1.0, 0.0), ErrorBudget::default()));
    }
    let norm = beta_field(p.eb, p.ec - p.eb).value()?;
    if norm == Complex64::new(0.0, 0.0) {
        return Err(Error::Pole("normalising beta vanishes".into()));
    }
    let e1 = p.eb - 1.0;
    let e2 = p.ec - p.eb - 1.0;
    let e3 = -p.ea;
    let one = Complex64::new(1.0, 0.0);
    let (sings, inf) = p.euler_exponents(z);
    let pole = if z == one { one } else { 1.0 / z };
    let f = |pt: &PlanePoint| {
        let (l1, u1) = field_power_ln(pt.z, e1);
        let (l2, u2) = field_power_ln(-pt.minus(one), e2);
        let w = -z * pt.minus(pole);
        let (l3, u3) = field_power_ln(w, e3);
        (l1 + l2 + l3).exp() * (u1 * u2 * u3)
    };
    let (v, b) = integrate_plane_with(&f, &sings, PlaneOptions { infinity_exponent: inf, parallel }, spec)?;
    let scale = 1.0 / (PI * norm.norm());
    Ok((v / (PI * norm), b.scaled(scale)))
}

/// `ln M(xi)` without the normalising constant, or `None` at zeros.
fn mellin_f21_ln(p: &F21Params, xi: FieldExponent) -> Option<Complex64> {
    let one = FieldExponent::symmetric(1.0);
    let g = gamma_field(xi) * gamma_field(p.ea - xi) * gamma_field(p.eb - xi) * gamma_field(one - p.ec + xi);
    match g {
        GammaValue::Finite { log_modulus, phase } => Some(Complex64::new(log_modulus, phase.arg())),
        _ => None,
    }
}

/// Mellin–Barnes route. Needs a non-empty strip and `z != 0`.
pub fn f21_mellin_barnes(p: &F21Params, z: Complex64, spec: &QuadSpec) -> Result<(Complex64, ErrorBudget)> {
    if z == Complex64::new(0.0, 0.0) {
        return Err(Error::Domain("Mellin–Barnes route needs z != 0".into()));
    }
    let (lo, hi) = p.mellin_strip()?;
    let gamma = 0.5 * (lo + hi);
    let one = FieldExponent::symmetric(1.0);
    let norm = gamma_field(p.ea) * gamma_field(p.eb) * gamma_field(one - p.ec);
    let ln_norm = match norm {
        GammaValue::Finite { log_modulus, phase } => Complex64::new(log_modulus, phase.arg()),
        _ => return Err(Error::Pole("Gamma(a) Gamma(b) Gamma(1-c) is zero or infinite".into())),
    };
    let ln_abs_z = z.norm().ln();
    let unit_z = z / z.norm();
    let f = |l: i64, y: f64| -> Complex64 {
        let xi = FieldExponent::new(Complex64::new(0.5 * l as f64 + gamma, 0.5 * y), l);
        match mellin_f21_ln(p, xi) {
            // z^{-xi|-xi'} = |z|^{-tau} (z/|z|)^{-l}
            Some(lm) => (lm - ln_norm - Complex64::new(2.0 * gamma, y) * ln_abs_z).exp() * unit_z.powi(-(l as i32)),
            None => Complex64::new(0.0, 0.0),
        }
    };
    let centre = |e: FieldExponent| e.centre();
    let exponent = -2.0 + 2.0 * (centre(p.ea) + centre(p.eb) - centre(p.ec));
    let on_circle = (z.norm() - 1.0).abs() < 1e-12;
    let k_tail = if !on_circle {
        KTail::Geometric
    } else if (z - 1.0).norm() < 1e-12 {
        KTail::Fit { step: 1, terms: 4 }
    } else {
        KTail::Truncate
    };
    let model = LatticeModel { exponent, line_frequency: -ln_abs_z, k_tail, even_k: false, even_s: false };
    let mut spec = *spec;
    if !on_circle {
        // The oscillatory tail model needs |w| S well above one.
        spec.line_cutoff = spec.line_cutoff.min((60.0 / ln_abs_z.abs()).max(200.0));
    }
    let r = sum_integral_lattice_with(&f, &model, &spec)?;
    Ok((r.value / (4.0 * PI), r.budget.scaled(1.0 / (4.0 * PI))))
}

/// `G(c) G(c-a-b) / (G(c-a) G(c-b))`, the value at `z = 1`.
pub fn f21_gauss_value(p: &F21Params) -> Result<GammaValue> {
    if !p.gauss_condition() {
        return Err(Error::Domain(format!("need [c] > [a] + [b], got {} <= {}", p.ec.bracket(), p.ea.bracket() + p.eb.bracket())));
    }
    let c = p.ec;
    Ok(gamma_field(c) * gamma_field(c - p.ea - p.eb) / (gamma_field(c - p.ea) * gamma_field(c - p.eb)))
}

/// Parameters of the index-transform kernel at `pt`: upper `a+lambda|a+lambda'`,
/// `a-lambda|a-lambda'`, lower `a+b|a+b`. The point is first mapped to the
/// half with `k > 0` or `k = 0, s >= 0`, so the kernel is exactly even.
pub fn kernel_params(a: f64, b: f64, pt: SpectralPoint) -> F21Params {
    let pt = if pt.k < 0 || (pt.k == 0 && pt.s < 0.0) { pt.reflect() } else { pt };
    let base = FieldExponent::symmetric(a);
    F21Params::new(base + pt, base - pt, FieldExponent::symmetric(a + b))
}

/// The kernel `K(z; k, s) = F(z) / G(a+b|a+b)`.
pub fn kernel_k(a: f64, b: f64, pt: SpectralPoint, z: Complex64, method: F21Method, spec: &QuadSpec) -> Result<(Complex64, ErrorBudget)> {
    if !(0.0..=1.0).contains(&a) || !(0.0..=1.0).contains(&b) {
        return Err(Error::Domain(format!("kernel needs 0 <= a, b <= 1, got a={a}, b={b}")));
    }
    let g = gamma_field(FieldExponent::symmetric(a + b)).value()?;
    let (v, bud) = f21_field(&kernel_params(a, b, pt), z, method, spec)?;
    Ok((v / g, bud.scaled(1.0 / g.norm())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn spec(rel: f64) -> QuadSpec {
        QuadSpec { rel_tol: rel, ..QuadSpec::default() }
    }

    #[test]
    fn gauss_value_trivial_and_oracle() {
        let p = F21Params::new(FieldExponent::symmetric(0.0), FieldExponent::symmetric(0.3), FieldExponent::symmetric(0.8));
        assert!((f21_gauss_value(&p).unwrap().value().unwrap() - 1.0).norm() < 1e-14);
        let p = F21Params::real(0.1, 0.1, 0.8);
        let v = f21_gauss_value(&p).unwrap().value().unwrap();
        // [G(0.8)/G(0.2)] [G(0.6)/G(0.4)] / [G(0.7)/G(0.3)]^2 with the real gamma, mpmath
        assert!((v.re - 0.904_306_789_641_035).abs() < 1e-13, "{v}");
        assert!(f21_gauss_value(&F21Params::real(0.5, 0.4, 0.8)).is_err());
    }

    #[test]
    fn strip_errors() {
        let p = F21Params::new(FieldExponent::new(c(0.1, 0.0), 1), FieldExponent::symmetric(0.1), FieldExponent::symmetric(0.9));
        assert!(matches!(p.mellin_strip(), Err(Error::EmptyStrip(_))));
        assert!(F21Params::real(0.2, 0.2, 0.9).mellin_strip().is_ok());
    }

    #[test]
    fn near_zero_is_one() {
        let p = F21Params::real(0.2, 0.3, 0.7);
        let (v, _) = f21_direct(&p, c(1e-4, 0.0), &spec(1e-8)).unwrap();
        assert!((v - 1.0).norm() < 1e-3, "{v}");
        assert_eq!(f21_direct(&p, c(0.0, 0.0), &spec(1e-8)).unwrap().0, c(1.0, 0.0));
    }

    #[test]
    fn routes_agree() {
        let p = F21Params::real(0.2, 0.2, 0.9);
        let z = c(0.3, 0.1);
        let (d, _) = f21_direct(&p, z, &spec(1e-8)).unwrap();
        let (m, _) = f21_mellin_barnes(&p, z, &spec(1e-8)).unwrap();
        assert!((d - m).norm() < 1e-4 * m.norm(), "direct {d} mb {m}");
    }

    #[test]
    fn series_route_matches_direct() {
        let delta = F21Params::new(FieldExponent::new(c(0.6, 0.1), 1), FieldExponent::symmetric(0.15), FieldExponent::new(c(0.9, 0.0), 1));
        let kernel = kernel_params(0.15, 0.15, SpectralPoint::new(1, 0.3));
        let cases = [
            (F21Params::real(0.2, 0.2, 0.9), c(0.3, 0.1)),
            (F21Params::real(0.2, 0.2, 0.9), c(-2.5, 1.5)),
            (delta, c(0.8, -0.4)),
            (delta, c(3.0, 0.0)),
            (kernel, c(1.1, 0.05)),
            (kernel, c(-0.4, 0.9)),
        ];
        for (p, z) in cases {
            let (d, b) = f21_direct(&p, z, &spec(1e-10)).unwrap();
            let (s, _) = f21_series(&p, z).unwrap();
            assert!((d - s).norm() < 1e-7 * s.norm() + 10.0 * b.total(), "z = {z}: direct {d} series {s}");
        }
    }

    #[test]
    fn series_route_is_continuous_across_the_cut() {
        let p = F21Params::new(FieldExponent::new(c(0.6, 0.1), 1), FieldExponent::symmetric(0.25), FieldExponent::symmetric(0.7));
        let (up, _) = f21_series(&p, c(2.0, 1e-12)).unwrap();
        let (down, _) = f21_series(&p, c(2.0, -1e-12)).unwrap();
        assert!((up - down).norm() < 1e-9 * up.norm(), "{up} {down}");
    }

    #[test]
    fn expansions_at_zero_and_infinity_agree() {
        for pt in [SpectralPoint::new(0, 0.7), SpectralPoint::new(1, 0.3), SpectralPoint::new(3, -1.5)] {
            let p = kernel_params(0.15, 0.2, pt);
            for z in [c(2.5, 0.3), c(-2.2, -1.0), c(0.4, 2.6), c(3.0, 1e-9)] {
                let (v0, _) = f21_series_zero(&p, z).unwrap();
                let (v1, _) = f21_series_infinity(&p, z).unwrap().unwrap();
                assert!((v0 - v1).norm() < 1e-10 * v1.norm(), "{pt:?} {z}: {v0} {v1}");
            }
        }
    }

    #[test]
    fn large_argument_decays_for_shifted_parameters() {
        // Field brackets of a, b are 0.15, so |F| <= C |z|^{-0.3}.
        let p = kernel_params(0.15, 0.15, SpectralPoint::new(2, 0.4));
        for r in [1e3, 1e8, 1e20] {
            let (v, _) = f21_series(&p, c(0.6 * r, -0.8 * r)).unwrap();
            assert!(v.norm() < 10.0 * r.powf(-0.3), "{r}: {v}");
        }
    }

    #[test]
    fn kernel_even() {
        let s = spec(1e-6);
        let z = c(0.4, -0.7);
        let (k1, _) = kernel_k(0.15, 0.15, SpectralPoint::new(1, 0.3), z, F21Method::MellinBarnes, &s).unwrap();
        let (k2, _) = kernel_k(0.15, 0.15, SpectralPoint::new(-1, -0.3), z, F21Method::MellinBarnes, &s).unwrap();
        assert_eq!(k1, k2);
    }
}
