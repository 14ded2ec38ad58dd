//! Parameter pairs `a|a'`, field powers, and the gamma and beta functions of
//! the complex field.

use crate::error::{Error, Result};
use crate::lgamma::ln_gamma;
use num_complex::Complex64;
use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Arguments closer than this to a nonpositive integer count as poles.
pub const POLE_TOL: f64 = 1e-9;

/// A pair `a|a'` with `a - a' = delta` an integer.
///
/// Only `a` and `delta` are stored, so the integrality of the difference
/// holds by construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldExponent {
    pub a: Complex64,
    pub delta: i64,
}

impl FieldExponent {
    pub fn new(a: Complex64, delta: i64) -> Self {
        Self { a, delta }
    }

    /// The diagonal pair `x|x`.
    pub fn symmetric(x: f64) -> Self {
        Self::new(Complex64::new(x, 0.0), 0)
    }

    /// Complex diagonal pair `x|x`.
    pub fn diag(x: Complex64) -> Self {
        Self::new(x, 0)
    }

    /// Builds `a|a'` from both components; fails unless `a - a'` is an integer.
    pub fn from_pair(a: Complex64, a_prime: Complex64) -> Result<Self> {
        let d = a - a_prime;
        let n = d.re.round();
        if (d.re - n).abs() > 1e-12 || d.im.abs() > 1e-12 {
            return Err(Error::Domain(format!("{a}|{a_prime}: difference {d} is not an integer")));
        }
        Ok(Self::new(a, n as i64))
    }

    pub fn a_prime(&self) -> Complex64 {
        self.a - self.delta as f64
    }

    /// `[a|a'] = Re(a) - delta/2`.
    pub fn bracket(&self) -> f64 {
        self.a.re - 0.5 * self.delta as f64
    }

    /// Adds the same complex number to both components.
    pub fn shift(self, c: Complex64) -> Self {
        Self::new(self.a + c, self.delta)
    }

    /// `(a + a') / 2`, the centre of the pair.
    pub fn centre(&self) -> Complex64 {
        self.a - 0.5 * self.delta as f64
    }
}

impl fmt::Display for FieldExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}", self.a, self.a_prime())
    }
}

impl Add for FieldExponent {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.a + o.a, self.delta + o.delta)
    }
}

impl Sub for FieldExponent {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.a - o.a, self.delta - o.delta)
    }
}

impl Neg for FieldExponent {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.a, -self.delta)
    }
}

impl Add<f64> for FieldExponent {
    type Output = Self;
    fn add(self, x: f64) -> Self {
        Self::new(self.a + x, self.delta)
    }
}

impl Sub<f64> for FieldExponent {
    type Output = Self;
    fn sub(self, x: f64) -> Self {
        Self::new(self.a - x, self.delta)
    }
}

impl Add<SpectralPoint> for FieldExponent {
    type Output = Self;
    fn add(self, p: SpectralPoint) -> Self {
        self + p.to_exponent()
    }
}

impl Sub<SpectralPoint> for FieldExponent {
    type Output = Self;
    fn sub(self, p: SpectralPoint) -> Self {
        self - p.to_exponent()
    }
}

/// A point `(k, s)` of the unitary lattice, `lambda = (k + is)/2`,
/// `lambda' = (-k + is)/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralPoint {
    pub k: i64,
    pub s: f64,
}

impl SpectralPoint {
    pub fn new(k: i64, s: f64) -> Self {
        Self { k, s }
    }

    pub fn lambda(&self) -> Complex64 {
        Complex64::new(0.5 * self.k as f64, 0.5 * self.s)
    }

    pub fn lambda_prime(&self) -> Complex64 {
        Complex64::new(-0.5 * self.k as f64, 0.5 * self.s)
    }

    pub fn to_exponent(&self) -> FieldExponent {
        FieldExponent::new(self.lambda(), self.k)
    }

    /// `(-k, -s)`.
    pub fn reflect(&self) -> Self {
        Self::new(-self.k, -self.s)
    }
}

/// An overflow-safe value: `exp(log_modulus) * phase`, or an exact zero or pole.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GammaValue {
    Finite {
        log_modulus: f64,
        phase: Complex64,
    },
    /// Exact zero caused by a pole in a denominator.
    Zero {
        at: Complex64,
    },
    /// Pole; `at` is the offending argument.
    Pole {
        at: Complex64,
    },
    /// Zero times pole.
    Indeterminate,
}

impl GammaValue {
    pub fn one() -> Self {
        Self::Finite { log_modulus: 0.0, phase: Complex64::new(1.0, 0.0) }
    }

    /// From a complex logarithm `ln v` and an extra factor `i^quarter_turns`.
    pub fn from_ln(ln: Complex64, quarter_turns: i64) -> Self {
        if ln.re == f64::INFINITY {
            return Self::Pole { at: Complex64::new(f64::NAN, f64::NAN) };
        }
        if ln.re == f64::NEG_INFINITY {
            return Self::Zero { at: Complex64::new(f64::NAN, f64::NAN) };
        }
        let phase = Complex64::from_polar(1.0, ln.im) * i_pow(quarter_turns);
        Self::Finite { log_modulus: ln.re, phase }
    }

    pub fn from_complex(v: Complex64) -> Self {
        if v == Complex64::new(0.0, 0.0) {
            return Self::Zero { at: v };
        }
        let m = v.norm();
        Self::Finite { log_modulus: m.ln(), phase: v / m }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Self::Finite { .. } | Self::Zero { .. })
    }

    /// The complex value; poles and `0 * inf` are errors.
    pub fn value(&self) -> Result<Complex64> {
        match *self {
            Self::Finite { log_modulus, phase } => Ok(phase * log_modulus.exp()),
            Self::Zero { .. } => Ok(Complex64::new(0.0, 0.0)),
            Self::Pole { at } => Err(Error::Pole(format!("{at}"))),
            Self::Indeterminate => Err(Error::Pole("zero times pole".into())),
        }
    }

    /// `ln |v|`, `-inf` for zeros.
    pub fn ln_modulus(&self) -> f64 {
        match *self {
            Self::Finite { log_modulus, .. } => log_modulus,
            Self::Zero { .. } => f64::NEG_INFINITY,
            Self::Pole { .. } => f64::INFINITY,
            Self::Indeterminate => f64::NAN,
        }
    }

    pub fn recip(self) -> Self {
        match self {
            Self::Finite { log_modulus, phase } => Self::Finite { log_modulus: -log_modulus, phase: phase.conj() },
            Self::Zero { at } => Self::Pole { at },
            Self::Pole { at } => Self::Zero { at },
            Self::Indeterminate => Self::Indeterminate,
        }
    }

    pub fn conj(self) -> Self {
        match self {
            Self::Finite { log_modulus, phase } => Self::Finite { log_modulus, phase: phase.conj() },
            Self::Zero { at } => Self::Zero { at: at.conj() },
            Self::Pole { at } => Self::Pole { at: at.conj() },
            Self::Indeterminate => Self::Indeterminate,
        }
    }

    /// `self * v` for an ordinary complex `v`.
    pub fn scale(self, v: Complex64) -> Result<Complex64> {
        Ok(self.value()? * v)
    }
}

impl Mul for GammaValue {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        use GammaValue::*;
        match (self, o) {
            (Finite { log_modulus: l1, phase: p1 }, Finite { log_modulus: l2, phase: p2 }) => {
                let p = p1 * p2;
                Finite { log_modulus: l1 + l2, phase: p / p.norm() }
            }
            (Indeterminate, _) | (_, Indeterminate) => Indeterminate,
            (Zero { .. }, Pole { .. }) | (Pole { .. }, Zero { .. }) => Indeterminate,
            (Zero { at }, _) | (_, Zero { at }) => Zero { at },
            (Pole { at }, _) | (_, Pole { at }) => Pole { at },
        }
    }
}

impl Div for GammaValue {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Self) -> Self {
        self * o.recip()
    }
}

fn i_pow(n: i64) -> Complex64 {
    match n.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// `z^{a|a'} = |z|^{a+a'} e^{i delta arg z}`.
pub fn field_power(z: Complex64, e: FieldExponent) -> Result<Complex64> {
    if z == Complex64::new(0.0, 0.0) {
        return Err(Error::Domain("field power of zero".into()));
    }
    Ok(field_power_unchecked(z, e))
}

/// [`field_power`] without the zero check; returns NaN at `z = 0`.
#[inline]
pub fn field_power_unchecked(z: Complex64, e: FieldExponent) -> Complex64 {
    // One polar evaluation keeps the modulus of a unitary power at 1 to
    // rounding, whatever the size of delta.
    let w = (e.a + e.a_prime()) * z.norm().ln();
    Complex64::from_polar(w.re.exp(), w.im + e.delta as f64 * z.arg())
}

/// `ln` of the modulus factor and the unit phase of a field power, kept
/// separate so products of many powers can be accumulated in log space.
#[inline]
pub fn field_power_ln(z: Complex64, e: FieldExponent) -> (Complex64, Complex64) {
    let r = z.norm();
    ((e.a + e.a_prime()) * r.ln(), (z / r).powi(e.delta as i32))
}

fn near_integer(z: Complex64) -> Option<i64> {
    let n = z.re.round();
    if (z.re - n).abs() <= POLE_TOL && z.im.abs() <= POLE_TOL {
        Some(n as i64)
    } else {
        None
    }
}

/// `Gamma^C(a|a') = i^delta Gamma(a)/Gamma(1-a') = i^{-delta} Gamma(a')/Gamma(1-a)`.
pub fn gamma_field(e: FieldExponent) -> GammaValue {
    let a = e.a;
    let ap = e.a_prime();
    if let Some(m) = near_integer(a) {
        let n = m - e.delta;
        let at = Complex64::new(m as f64, 0.0);
        return match (m <= 0, n <= 0) {
            (true, true) => GammaValue::Pole { at },
            (false, false) => GammaValue::Zero { at },
            // a a pole of Gamma(a): use the second expression.
            (true, false) => GammaValue::from_ln(ln_gamma(Complex64::new(n as f64, 0.0)) - ln_gamma(Complex64::new(1.0 - m as f64, 0.0)), -e.delta),
            (false, true) => GammaValue::from_ln(ln_gamma(Complex64::new(m as f64, 0.0)) - ln_gamma(Complex64::new(1.0 - n as f64, 0.0)), e.delta),
        };
    }
    GammaValue::from_ln(ln_gamma(a) - ln_gamma(1.0 - ap), e.delta)
}

/// Second expression `i^{-delta} Gamma(a')/Gamma(1-a)`, for consistency checks.
pub fn gamma_field_alt(e: FieldExponent) -> GammaValue {
    GammaValue::from_ln(ln_gamma(e.a_prime()) - ln_gamma(1.0 - e.a), -e.delta)
}

/// `ln Gamma^C(e)` as a complex number (branch irrelevant), or `None` at
/// poles and zeros. Used in hot loops where the integrand is a long product.
#[inline]
pub fn ln_gamma_field(e: FieldExponent) -> Option<Complex64> {
    match gamma_field(e) {
        GammaValue::Finite { log_modulus, phase } => Some(Complex64::new(log_modulus, phase.arg())),
        _ => None,
    }
}

/// `B^C(e1, e2) = Gamma^C(e1) Gamma^C(e2) / Gamma^C(e1 + e2)`.
pub fn beta_field(e1: FieldExponent, e2: FieldExponent) -> GammaValue {
    gamma_field(e1) * gamma_field(e2) / gamma_field(e1 + e2)
}

/// Whether the defining plane integral of `B^C(e1, e2)` converges:
/// `[e1] > 0`, `[e2] > 0`, `[e1] + [e2] < 1`.
pub fn beta_converges(e1: FieldExponent, e2: FieldExponent) -> bool {
    e1.bracket() > 0.0 && e2.bracket() > 0.0 && e1.bracket() + e2.bracket() < 1.0
}

/// Leading term of `Gamma^C(base + lambda)` as `|lambda| -> inf`.
pub fn gamma_asymptotic(base: FieldExponent, lam: SpectralPoint) -> Result<Complex64> {
    gamma_asymptotic_branch(base, lam, 0)
}

/// [`gamma_asymptotic`] with `ln lambda` shifted by `2 pi i n`; the result
/// does not depend on `n`.
pub fn gamma_asymptotic_branch(base: FieldExponent, lam: SpectralPoint, n: i64) -> Result<Complex64> {
    let l = lam.lambda();
    if l.norm() == 0.0 {
        return Err(Error::Domain("asymptotic form needs lambda != 0".into()));
    }
    let big_l = l.ln() + Complex64::new(0.0, 2.0 * PI * n as f64);
    let power = field_power_unchecked(l, base - 0.5);
    // lambda^lambda * conj(lambda)^{-conj lambda} = exp(2 i Im(lambda L))
    let self_power = Complex64::new(0.0, 2.0 * (l * big_l).im).exp();
    let damp = Complex64::new(0.0, -lam.s).exp();
    Ok(i_pow(base.delta + lam.k) * power * self_power * damp)
}

/// `Re a_j > 0` for all four and `Re sum a_j < 1`.
pub fn in_theorem_domain(a: &[Complex64; 4]) -> bool {
    a.iter().all(|x| x.re > 0.0) && a.iter().map(|x| x.re).sum::<f64>() < 1.0
}

/// Real-parameter hypothesis: `a_j > 0` real and `sum a_j < 1`.
pub fn in_theorem_domain_real(a: &[f64; 4]) -> bool {
    a.iter().all(|&x| x > 0.0) && a.iter().sum::<f64>() < 1.0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn field_power_examples() {
        let v = field_power(c(-1.0, 0.0), FieldExponent::new(c(3.0, 0.0), 2)).unwrap();
        assert!((v - c(1.0, 0.0)).norm() < 1e-14);
        let v = field_power(c(0.0, 1.0), FieldExponent::new(c(0.5, 0.0), 1)).unwrap();
        assert!((v - c(0.0, 1.0)).norm() < 1e-15);
        assert!(field_power(c(0.0, 0.0), FieldExponent::symmetric(0.5)).is_err());
        let p = SpectralPoint::new(3, -1.7).to_exponent();
        assert!((field_power(c(0.3, -2.2), p).unwrap().norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn gamma_examples() {
        let half = gamma_field(FieldExponent::symmetric(0.5)).value().unwrap();
        assert!((half - 1.0).norm() < 1e-15);
        assert!(matches!(gamma_field(FieldExponent::symmetric(1.0)), GammaValue::Zero { .. }));
        let q = gamma_field(FieldExponent::symmetric(0.25)).value().unwrap();
        // Gamma(1/4)/Gamma(3/4), 20 digits
        assert!((q.re - 2.958_675_119_188_638_9).abs() < 1e-14 && q.im.abs() < 1e-15);
        let v = gamma_field(FieldExponent::new(c(0.0, 1.0), 0)).value().unwrap();
        // mpmath gamma(1j)/gamma(1-1j)
        let want = c(-0.567_347_059_832_407_6, -0.823_478_787_643_933_5);
        assert!((v - want).norm() < 1e-14, "{v}");
        assert!((v.norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn poles_and_mixed_integers() {
        assert!(matches!(gamma_field(FieldExponent::new(c(-1.0, 0.0), 1)), GammaValue::Pole { .. }));
        assert!(matches!(gamma_field(FieldExponent::new(c(2.0, 0.0), 1)), GammaValue::Zero { .. }));
        // 0|-1 is a pole of both Gamma(a) and Gamma(a'): pole.
        assert!(matches!(gamma_field(FieldExponent::new(c(0.0, 0.0), 1)), GammaValue::Pole { .. }));
        // 0|2: Gamma(0) pole against 1/Gamma(1-2) zero; finite via i^{-delta}Gamma(2)/Gamma(1).
        let v = gamma_field(FieldExponent::new(c(0.0, 0.0), -2)).value().unwrap();
        assert!((v - c(-1.0, 0.0)).norm() < 1e-14, "{v}");
        // Compare with the limit from a nearby point.
        let e = FieldExponent::new(c(1e-7, 0.0), -2);
        let near = gamma_field_alt(e).value().unwrap();
        assert!((near - v).norm() < 1e-5);
    }

    #[test]
    fn beta_examples() {
        let h = FieldExponent::symmetric(0.5);
        assert!(matches!(beta_field(h, h), GammaValue::Pole { .. }));
        let q = FieldExponent::symmetric(0.25);
        let v = beta_field(q, q).value().unwrap();
        assert!((v.re - 2.958_675_119_188_638_9f64.powi(2)).abs() < 1e-12, "{v}");
        assert!(beta_converges(FieldExponent::symmetric(0.3), FieldExponent::symmetric(0.3)));
        assert!(!beta_converges(FieldExponent::symmetric(0.6), FieldExponent::symmetric(0.5)));
    }

    #[test]
    fn asymptotic_branch_invariance() {
        let base = FieldExponent::new(c(0.3, 0.2), 1);
        let p = SpectralPoint::new(-7, 40.0);
        let v0 = gamma_asymptotic(base, p).unwrap();
        for n in [-2, -1, 1, 3] {
            let v = gamma_asymptotic_branch(base, p, n).unwrap();
            assert!((v - v0).norm() <= 1e-12 * v0.norm());
        }
        assert!(gamma_asymptotic(base, SpectralPoint::new(0, 0.0)).is_err());
    }

    #[test]
    fn asymptotic_ratio_along_ray() {
        let base = FieldExponent::new(c(0.2, -0.1), 0);
        let mut last = f64::INFINITY;
        for s in [1e2, 1e3, 1e4] {
            let p = SpectralPoint::new(0, s);
            let r = gamma_field(base + p).value().unwrap() / gamma_asymptotic(base, p).unwrap();
            let err = (r - 1.0).norm();
            assert!(err < last);
            last = err;
        }
        assert!(last < 1e-4);
    }

    #[test]
    fn domain_predicates() {
        assert!(in_theorem_domain_real(&[0.2; 4]));
        assert!(!in_theorem_domain_real(&[0.25; 4]));
        assert!(in_theorem_domain(&[c(0.3, 0.1), c(0.2, -0.05), c(0.1, 0.0), c(0.2, 0.0)]));
    }
}
