//! Tail models: Hurwitz zeta sums and asymptotic tails of line integrals.

use super::sum::CompensatedSum;
use num_complex::Complex64;

// B_{2j} / (2j)!
const BERN: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1209600.0,
    1.0 / 47900160.0,
    -691.0 / 1307674368000.0,
    1.0 / 74724249600.0,
    -3617.0 / 10670622842880000.0,
    43867.0 / 5109094217170944000.0,
    -174611.0 / 802857662698291200000.0,
];

/// `sum_{m >= n} m^{-s}` for `Re s > 1`, `n >= 1`, by Euler–Maclaurin.
pub fn hurwitz_zeta(s: Complex64, n: u64) -> Complex64 {
    assert!(n >= 1 && s.re > 1.0, "hurwitz_zeta needs n >= 1 and Re s > 1");
    let m_start = n.max(16 + (s.norm() as u64));
    let mut acc = CompensatedSum::new();
    for m in n..m_start {
        acc.add((-s * (m as f64).ln()).exp());
    }
    let big_m = m_start as f64;
    let ln_m = big_m.ln();
    let pow = (-s * ln_m).exp();
    acc.add(pow * big_m / (s - 1.0));
    acc.add(pow * 0.5);
    // B_{2j}/(2j)! * s (s+1) ... (s+2j-2) * M^{-s-2j+1}
    let mut rising = s;
    let mut mpow = pow / big_m;
    for (j, &b) in BERN.iter().enumerate() {
        let term = rising * mpow * b;
        acc.add(term);
        if term.norm() < 1e-18 * acc.value().norm() {
            break;
        }
        let k = 2.0 * j as f64;
        rising *= (s + k + 1.0) * (s + k + 2.0);
        mpow /= big_m * big_m;
    }
    acc.value()
}

/// `int_S^inf s^p e^{i w s} ds`.
///
/// Closed form for `w = 0` (needs `Re p < -1`); asymptotic integration by
/// parts otherwise (needs `|w| S` large). Returns `(value, error)`.
pub fn power_tail(p: Complex64, w: f64, big_s: f64) -> (Complex64, f64) {
    let sp = (p * big_s.ln()).exp();
    if w == 0.0 {
        let v = -sp * big_s / (p + 1.0);
        return (v, 0.0);
    }
    // I = -e^{iwS} sum_n (-1)^n p (p-1) ... (p-n+1) S^{p-n} / (iw)^{n+1}
    let iw = Complex64::new(0.0, w);
    let mut term = sp / iw;
    let mut acc = Complex64::new(0.0, 0.0);
    let mut last = f64::INFINITY;
    let mut err = 0.0;
    for n in 0..40 {
        let t = term.norm();
        if t > last {
            err = last;
            break;
        }
        acc += term;
        last = t;
        err = t;
        if t < 1e-17 * acc.norm() {
            break;
        }
        term *= -(p - n as f64) / (iw * big_s);
    }
    (-Complex64::new(0.0, w * big_s).exp() * acc, err)
}

/// Solves the small dense system `A x = b` by Gaussian elimination with
/// partial pivoting. Returns `None` when singular.
pub fn solve(mut a: Vec<Vec<Complex64>>, mut b: Vec<Complex64>) -> Option<Vec<Complex64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].norm().total_cmp(&a[j][col].norm()))?;
        if a[piv][col].norm() == 0.0 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                let v = a[col][k];
                a[row][k] -= f * v;
            }
            let v = b[col];
            b[row] -= f * v;
        }
    }
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for k in row + 1..n {
            acc -= a[row][k] * x[k];
        }
        x[row] = acc / a[row][row];
    }
    Some(x)
}

/// Fits `h(k) = k^q sum_{j<terms} C_j k^{-j step}` through the samples
/// `(k_m, h_m)` and returns `sum_{k > big_k} h(k)`.
pub fn fitted_power_tail(q: Complex64, step: u32, samples: &[(f64, Complex64)], big_k: u64) -> Option<Complex64> {
    let n = samples.len();
    let a: Vec<Vec<Complex64>> =
        samples.iter().map(|&(k, _)| (0..n).map(|j| Complex64::new(k.powi(-((j as u32 * step) as i32)), 0.0)).collect()).collect();
    let b: Vec<Complex64> = samples.iter().map(|&(k, h)| h / (q * k.ln()).exp()).collect();
    let c = solve(a, b)?;
    let mut tail = Complex64::new(0.0, 0.0);
    for (j, cj) in c.iter().enumerate() {
        tail += cj * hurwitz_zeta(Complex64::new((j as u32 * step) as f64, 0.0) - q, big_k + 1);
    }
    Some(tail)
}
