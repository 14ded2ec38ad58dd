//! Adaptive 21-point Gauss–Kronrod quadrature for complex-valued integrands.

use super::sum::CompensatedSum;
use crate::error::{Error, Result};
use num_complex::Complex64;
use rayon::prelude::*;

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];
// Gauss weights for the odd-indexed Kronrod nodes 1, 3, 5, 7, 9.
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Acceptance rule for the adaptive driver.
///
/// A result is accepted once its error estimate is below the largest of
/// `abs`, `rel * |I|` and `l1_rel * int |f|`. The last term keeps integrals
/// that cancel to (near) zero from refining forever.
#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
    pub l1_rel: f64,
    pub max_subdivisions: usize,
}

impl Tolerance {
    pub fn new(rel: f64, abs: f64) -> Self {
        Self { rel, abs, l1_rel: rel * 1e-2, max_subdivisions: 4000 }
    }

    fn target(&self, value: Complex64, l1: f64) -> f64 {
        self.abs.max(self.rel * value.norm()).max(self.l1_rel * l1).max(50.0 * f64::EPSILON * l1)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Integral {
    pub value: Complex64,
    pub error: f64,
    /// `int |f|` estimate.
    pub l1: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    lo: f64,
    hi: f64,
    value: Complex64,
    error: f64,
    l1: f64,
    frozen: bool,
}

fn nodes(lo: f64, hi: f64) -> [f64; 21] {
    let c = 0.5 * (lo + hi);
    let h = 0.5 * (hi - lo);
    let mut x = [0.0; 21];
    for i in 0..10 {
        x[2 * i] = c - h * XGK[i];
        x[2 * i + 1] = c + h * XGK[i];
    }
    x[20] = c;
    x
}

fn rule(lo: f64, hi: f64, fv: &[Complex64; 21]) -> Panel {
    let h = 0.5 * (hi - lo);
    let mut k = Complex64::new(0.0, 0.0);
    let mut g = Complex64::new(0.0, 0.0);
    let mut abs = 0.0;
    for i in 0..10 {
        let pair = fv[2 * i] + fv[2 * i + 1];
        k += pair * WGK[i];
        abs += WGK[i] * (fv[2 * i].norm() + fv[2 * i + 1].norm());
        if i % 2 == 1 {
            g += pair * WG[i / 2];
        }
    }
    k += fv[20] * WGK[10];
    abs += WGK[10] * fv[20].norm();
    let mean = k * 0.5;
    let mut asc = WGK[10] * (fv[20] - mean).norm();
    for i in 0..10 {
        asc += WGK[i] * ((fv[2 * i] - mean).norm() + (fv[2 * i + 1] - mean).norm());
    }
    let value = k * h;
    let abs = abs * h.abs();
    let asc = asc * h.abs();
    let mut err = ((k - g) * h).norm();
    if asc != 0.0 && err != 0.0 {
        err = asc * (200.0 * err / asc).powf(1.5).min(1.0);
    }
    if abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * abs);
    }
    if !value.re.is_finite() || !value.im.is_finite() {
        err = f64::INFINITY;
    }
    Panel { lo, hi, value, error: err, l1: abs, frozen: false }
}

fn eval_panel<F>(f: &F, lo: f64, hi: f64, par: bool) -> Panel
where
    F: Fn(f64) -> Complex64 + Sync,
{
    let x = nodes(lo, hi);
    let mut fv = [Complex64::new(0.0, 0.0); 21];
    if par {
        fv.par_iter_mut().zip(x.par_iter()).for_each(|(v, &t)| *v = f(t));
    } else {
        for (v, &t) in fv.iter_mut().zip(x.iter()) {
            *v = f(t);
        }
    }
    rule(lo, hi, &fv)
}

/// One 21-point Kronrod panel: `(value, error)`.
pub fn gk21<F: Fn(f64) -> Complex64 + Sync>(f: &F, lo: f64, hi: f64) -> (Complex64, f64) {
    let p = eval_panel(f, lo, hi, false);
    (p.value, p.error)
}

/// Adaptive integration over `[breaks[0], breaks[last]]`, starting from the
/// panels delimited by `breaks`. With `par`, the nodes of each panel are
/// evaluated on the rayon pool; the arithmetic is identical either way.
pub fn adaptive<F>(f: &F, breaks: &[f64], tol: Tolerance, par: bool) -> Result<Integral>
where
    F: Fn(f64) -> Complex64 + Sync,
{
    match adaptive_partial(f, breaks, tol, par) {
        (r, None) => Ok(r),
        (_, Some(e)) => Err(e),
    }
}

/// As [`adaptive`], but on running out of subdivisions the current estimate
/// is returned alongside the error describing the worst panel.
pub fn adaptive_partial<F>(f: &F, breaks: &[f64], tol: Tolerance, par: bool) -> (Integral, Option<Error>)
where
    F: Fn(f64) -> Complex64 + Sync,
{
    assert!(breaks.len() >= 2, "need at least one panel");
    let mut panels: Vec<Panel> = if par {
        breaks.par_windows(2).map(|w| eval_panel(f, w[0], w[1], false)).collect()
    } else {
        breaks.windows(2).map(|w| eval_panel(f, w[0], w[1], false)).collect()
    };
    let mut evaluations = 21 * panels.len();
    let mut subdivisions = 0usize;
    loop {
        let (value, error, l1) = totals(&panels);
        if error <= tol.target(value, l1) {
            return (Integral { value, error, l1, evaluations }, None);
        }
        let worst = panels.iter().enumerate().filter(|(_, p)| !p.frozen).max_by(|a, b| a.1.error.total_cmp(&b.1.error)).map(|(i, _)| i);
        let Some(i) = worst else {
            // Every remaining panel is at the resolution limit; report honestly.
            return (Integral { value, error, l1, evaluations }, None);
        };
        if subdivisions >= tol.max_subdivisions {
            let p = panels[i];
            let e = Error::NoConvergence { subdivisions, lo: p.lo, hi: p.hi, error: p.error };
            return (Integral { value, error, l1, evaluations }, Some(e));
        }
        let p = panels[i];
        let mid = 0.5 * (p.lo + p.hi);
        let scale = p.lo.abs().max(p.hi.abs()).max(f64::MIN_POSITIVE);
        if (p.hi - p.lo).abs() <= 1e-14 * scale || mid == p.lo || mid == p.hi {
            panels[i].frozen = true;
            continue;
        }
        let (left, right) = if par {
            rayon::join(|| eval_panel(f, p.lo, mid, true), || eval_panel(f, mid, p.hi, true))
        } else {
            (eval_panel(f, p.lo, mid, false), eval_panel(f, mid, p.hi, false))
        };
        evaluations += 42;
        subdivisions += 1;
        panels[i] = left;
        panels.insert(i + 1, right);
    }
}

fn totals(panels: &[Panel]) -> (Complex64, f64, f64) {
    let mut s = CompensatedSum::new();
    let mut err = 0.0;
    let mut l1 = 0.0;
    for p in panels {
        s.add(p.value);
        err += p.error;
        l1 += p.l1;
    }
    (s.value(), err, l1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn real<F: Fn(f64) -> f64 + Sync>(f: F) -> impl Fn(f64) -> Complex64 + Sync {
        move |x| Complex64::new(f(x), 0.0)
    }

    #[test]
    fn polynomial_exact() {
        let (v, e) = gk21(&real(|x| x.powi(20)), 0.0, 1.0);
        assert!((v.re - 1.0 / 21.0).abs() < 1e-15 && e < 1e-13, "{v} {e}");
    }

    #[test]
    fn gauss_nodes_are_consistent() {
        // The 10-point Gauss rule integrates x^18 exactly.
        let x = nodes(-1.0, 1.0);
        let mut g = 0.0;
        for i in 0..10 {
            if i % 2 == 1 {
                g += WG[i / 2] * (x[2 * i].powi(18) + x[2 * i + 1].powi(18));
            }
        }
        assert!((g - 2.0 / 19.0).abs() < 1e-15);
    }

    #[test]
    fn endpoint_singularity() {
        let r = adaptive(&real(|x| 1.0 / x.sqrt()), &[0.0, 1.0], Tolerance::new(1e-10, 1e-14), false).unwrap();
        assert!((r.value.re - 2.0).abs() < 1e-9, "{}", r.value);
    }

    #[test]
    fn oscillatory_complex() {
        let f = |x: f64| Complex64::new(0.0, 20.0 * x).exp();
        let r = adaptive(&f, &[0.0, PI], Tolerance::new(1e-12, 1e-15), false).unwrap();
        assert!(r.value.norm() < 1e-12);
    }

    #[test]
    fn parallel_is_bit_identical() {
        let f = |x: f64| Complex64::new((x * 7.0).sin() / (1.0 + x * x), x.cos());
        let a = adaptive(&f, &[0.0, 0.5, 30.0], Tolerance::new(1e-12, 1e-15), false).unwrap();
        let b = adaptive(&f, &[0.0, 0.5, 30.0], Tolerance::new(1e-12, 1e-15), true).unwrap();
        assert_eq!(a.value, b.value);
    }

    #[test]
    fn reports_non_convergence() {
        let mut tol = Tolerance::new(1e-14, 1e-300);
        tol.max_subdivisions = 3;
        let r = adaptive(&real(|x| (1.0 / x).sin()), &[1e-6, 1.0], tol, false);
        assert!(matches!(r, Err(Error::NoConvergence { .. })));
    }
}
