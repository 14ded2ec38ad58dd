//! Complex log-gamma.
//!
//! Lanczos approximation (g = 7, nine coefficients) on `Re z >= 1/2`, the
//! reflection formula elsewhere. `ln sin(pi z)` is evaluated in a form that
//! stays finite for large `|Im z|` so the reflection branch never overflows.

use num_complex::Complex64;
use std::f64::consts::PI;

const G: f64 = 7.0;
const COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_7;
const LN_PI: f64 = 1.144_729_885_849_400_2;

/// `ln Gamma(z)` on some branch; only `exp` of the result is meaningful.
///
/// At the poles (nonpositive integers) the real part is `+inf`.
pub fn ln_gamma(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        Complex64::new(LN_PI, 0.0) - ln_sin_pi(z) - ln_gamma(1.0 - z)
    } else {
        let z = z - 1.0;
        let mut x = Complex64::new(COEF[0], 0.0);
        for (i, &c) in COEF.iter().enumerate().skip(1) {
            x += c / (z + i as f64);
        }
        let t = z + (G + 0.5);
        LN_SQRT_2PI + (z + 0.5) * t.ln() - t + x.ln()
    }
}

/// `ln Gamma(x)` for real `x`, returning `(ln|Gamma(x)|, sign)`.
pub fn ln_gamma_real(x: f64) -> (f64, f64) {
    let v = ln_gamma(Complex64::new(x, 0.0));
    let sign = if v.im.rem_euclid(2.0 * PI).cos() < 0.0 { -1.0 } else { 1.0 };
    (v.re, sign)
}

/// `Gamma(z)` by exponentiation of [`ln_gamma`].
pub fn gamma(z: Complex64) -> Complex64 {
    ln_gamma(z).exp()
}

/// `1/Gamma(z)`, exactly zero at the poles of Gamma.
pub fn rgamma(z: Complex64) -> Complex64 {
    if nonpositive_integer(z, 0.0).is_some() {
        return Complex64::new(0.0, 0.0);
    }
    (-ln_gamma(z)).exp()
}

/// Digamma `psi(z) = Gamma'(z)/Gamma(z)`: reflection below `Re z = 1/2`,
/// upward recurrence to `Re z >= 10`, then the asymptotic series.
pub fn digamma(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // cot(pi z) tends to -i sign(Im z) exponentially fast.
        let cot = if z.im.abs() > 20.0 { Complex64::new(0.0, -z.im.signum()) } else { 1.0 / (z * PI).tan() };
        return digamma(1.0 - z) - PI * cot;
    }
    let mut z = z;
    let mut acc = Complex64::new(0.0, 0.0);
    while z.re < 10.0 {
        acc -= 1.0 / z;
        z += 1.0;
    }
    // Coefficients B_2k / (2k) for k = 1..7.
    const C: [f64; 7] = [1.0 / 12.0, -1.0 / 120.0, 1.0 / 252.0, -1.0 / 240.0, 1.0 / 132.0, -691.0 / 32760.0, 1.0 / 12.0];
    let w = 1.0 / (z * z);
    let mut tail = Complex64::new(0.0, 0.0);
    for &c in C.iter().rev() {
        tail = (tail + c) * w;
    }
    acc + z.ln() - 0.5 / z - tail
}

/// Returns the integer if `z` lies within `tol` of a nonpositive integer.
pub fn nonpositive_integer(z: Complex64, tol: f64) -> Option<i64> {
    let n = z.re.round();
    if n <= 0.0 && (z.re - n).abs() <= tol && z.im.abs() <= tol {
        Some(n as i64)
    } else {
        None
    }
}

/// `ln sin(pi z)`, stable for large `|Im z|`.
pub fn ln_sin_pi(z: Complex64) -> Complex64 {
    let n = z.re.round();
    let w = Complex64::new(z.re - n, z.im);
    // sin(pi (w + n)) = (-1)^n sin(pi w)
    let parity = if (n as i64).rem_euclid(2) == 1 { Complex64::new(0.0, PI) } else { Complex64::new(0.0, 0.0) };
    let base = if w.im.abs() < 1.0 {
        (w * PI).sin().ln()
    } else if w.im > 0.0 {
        // sin(pi w) = e^{-i pi w} (1 - e^{2 pi i w}) i / 2
        let e = (Complex64::new(0.0, 2.0 * PI) * w).exp();
        Complex64::new(0.0, -PI) * w + (1.0 - e).ln() + Complex64::new(-std::f64::consts::LN_2, PI / 2.0)
    } else {
        ln_sin_pi(w.conj()).conj()
    };
    base + parity
}
