//! Seeded draws of admissible parameters for the randomized checks.
//!
//! Every draw comes from a [`ChaCha8Rng`], so a seed fixes the sample on
//! every platform and for every worker count.

use crate::field::FieldExponent;
use crate::hyper::F21Params;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn real4(r: &mut SampleRng, lo: f64, hi: f64) -> [Complex64; 4] {
    std::array::from_fn(|_| Complex64::new(r.gen_range(lo..hi), 0.0))
}

/// Real tuple with `a_j in (0.05, 0.22)`; the sum stays below 0.95.
pub fn main_tuple(r: &mut SampleRng) -> [Complex64; 4] {
    loop {
        let a = real4(r, 0.05, 0.22);
        if a.iter().map(|x| x.re).sum::<f64>() < 0.95 {
            return a;
        }
    }
}

/// Positive real tuple for the Wilson integral.
pub fn wilson_tuple(r: &mut SampleRng) -> [Complex64; 4] {
    real4(r, 0.05, 1.5)
}

/// `(b, theta)` with `b_j in (1.05, 2.5)`, `sum b > 4` and `theta` away from `Z/2`.
pub fn dougall_draw(r: &mut SampleRng) -> ([Complex64; 4], f64) {
    loop {
        let b = real4(r, 1.05, 2.5);
        if b.iter().map(|x| x.re).sum::<f64>() > 4.0 {
            return (b, r.gen_range(0.05..0.45));
        }
    }
}

/// Real parameters with `[c] > [a] + [b]` and a non-empty Mellin strip.
pub fn gauss_params(r: &mut SampleRng) -> F21Params {
    let a: f64 = r.gen_range(0.1..0.4);
    let b: f64 = r.gen_range(0.1..0.4);
    let c = r.gen_range(a + b + 0.05..1.0 + a.min(b) - 0.05);
    F21Params::real(a, b, c)
}

/// Parameters admissible for both the direct and the Mellin–Barnes route,
/// with `z` off the unit circle and away from `0`, `1` and infinity.
pub fn route_draw(r: &mut SampleRng) -> (F21Params, Complex64) {
    let a: f64 = r.gen_range(0.15..0.45);
    let b: f64 = r.gen_range(0.15..0.45);
    let c = r.gen_range(b + 0.1..(a + 0.9).min(1.0 + a.min(b) - 0.05));
    let modulus = if r.gen_bool(0.5) { r.gen_range(0.2..0.8) } else { r.gen_range(1.25..3.0) };
    let angle = r.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
    (F21Params::real(a, b, c), Complex64::from_polar(modulus, angle))
}

fn pole_distance(x: Complex64) -> f64 {
    let n = x.re.round().min(0.0);
    (x - n).norm()
}

/// A point `a|a'` of the parameter lattice with `|Re a| < 6`, `|Im a| < 3`,
/// `|delta| <= 6`, and `a`, `a'`, `1-a`, `1-a'` at distance at least 0.1
/// from the nonpositive integers.
pub fn lattice_point(r: &mut SampleRng) -> FieldExponent {
    loop {
        let a = Complex64::new(r.gen_range(-6.0..6.0), r.gen_range(-3.0..3.0));
        let e = FieldExponent::new(a, r.gen_range(-6..=6));
        let ap = e.a_prime();
        if [a, ap, 1.0 - a, 1.0 - ap].iter().all(|&x| pole_distance(x) >= 0.1) {
            return e;
        }
    }
}
