//! The index transform `J_{a,b}` between `L^2(C, rho)` and the even part of
//! `L^2(Lambda, kappa)`, the test family `H_mu`, and both inner products.
//!
//! Weights:
//!
//! ```text
//! rho(z)     = |z|^{2a+2b-2} |1-z|^{2a-2b}
//! kappa(k,s) = |lambda G(a+lambda|a+lambda') G(b+lambda|b+lambda')|^2
//! ```
//!
//! Pairings are `<f, g> = (1/pi) int f conj(g) rho d^2z` and
//! `<Phi, Psi> = (1/2pi) sum_{k in Z} int Phi conj(Psi) kappa ds`.

use crate::error::{Error, Result};
use crate::field::{gamma_field, FieldExponent, GammaValue, SpectralPoint};
use crate::hyper::{kernel_k, F21Method};
use crate::lgamma::ln_gamma;
use crate::numerics::{
    integrate_plane_with, sum_integral_lattice_with, ErrorBudget, KTail, LatticeModel, PlaneOptions, PlanePoint, QuadSpec, Singularity,
};
use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::Mutex;

/// Real `a, b` in `[0, 1]`, not both equal to one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightParams {
    pub a: f64,
    pub b: f64,
}

impl WeightParams {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !Self::admissible(a, b) {
            return Err(Error::Domain(format!("need 0 <= a, b <= 1 and (a, b) != (1, 1), got ({a}, {b})")));
        }
        Ok(Self { a, b })
    }

    pub fn admissible(a: f64, b: f64) -> bool {
        (0.0..=1.0).contains(&a) && (0.0..=1.0).contains(&b) && !(a == 1.0 && b == 1.0)
    }
}

/// `rho(z)`; the points `0` and `1` are rejected.
pub fn rho_weight(w: WeightParams, z: Complex64) -> Result<f64> {
    rho_from_distances(w, z.norm(), (1.0 - z).norm(), z)
}

/// `rho` at a quadrature node, with `|1-z|` taken from the node's offset.
pub fn rho_weight_at(w: WeightParams, p: &PlanePoint) -> Result<f64> {
    rho_from_distances(w, p.z.norm(), p.minus(Complex64::new(1.0, 0.0)).norm(), p.z)
}

fn rho_from_distances(w: WeightParams, r0: f64, r1: f64, z: Complex64) -> Result<f64> {
    if r0 == 0.0 || r1 == 0.0 {
        return Err(Error::Domain(format!("rho is singular at {z}")));
    }
    Ok(r0.powf(2.0 * (w.a + w.b) - 2.0) * r1.powf(2.0 * (w.a - w.b)))
}

/// Readings of the spectral weight compared by [`disambiguate_kappa`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KappaReading {
    /// `|lambda G(a+lambda|a+lambda') G(b+lambda|b+lambda')|^2`.
    Adopted,
    /// `|lambda G(a-lambda|a+conj lambda') G(b+lambda|b-lambda')|^2`. The
    /// second pair differs by `is`, so only its modulus
    /// `|Gamma(x) / Gamma(1-x')|` is meaningful.
    Printed,
    /// The adopted weight without the factor `|lambda|^2`.
    WithoutLambda,
}

impl KappaReading {
    pub const ALL: [KappaReading; 3] = [KappaReading::Adopted, KappaReading::Printed, KappaReading::WithoutLambda];

    pub fn name(&self) -> &'static str {
        match self {
            KappaReading::Adopted => "adopted",
            KappaReading::Printed => "printed",
            KappaReading::WithoutLambda => "without-lambda",
        }
    }
}

/// `ln |Gamma(x) / Gamma(1 - x')|` for any pair, legal or not.
fn ln_abs_pair(x: Complex64, x_prime: Complex64) -> f64 {
    ln_gamma(x).re - ln_gamma(1.0 - x_prime).re
}

/// `ln kappa` under the given reading; `-inf` at zeros.
pub fn kappa_ln(w: WeightParams, pt: SpectralPoint, reading: KappaReading) -> f64 {
    let lam = pt.lambda();
    let ln_lam = 2.0 * lam.norm().ln();
    let e = pt.to_exponent();
    let adopted =
        || 2.0 * (gamma_field(FieldExponent::symmetric(w.a) + e).ln_modulus() + gamma_field(FieldExponent::symmetric(w.b) + e).ln_modulus());
    match reading {
        KappaReading::Adopted => ln_lam + adopted(),
        KappaReading::WithoutLambda => adopted(),
        KappaReading::Printed => {
            let lp = pt.lambda_prime();
            let first = ln_abs_pair(w.a - lam, w.a + lp.conj());
            let second = ln_abs_pair(w.b + lam, w.b - lp);
            ln_lam + 2.0 * (first + second)
        }
    }
}

/// The adopted `kappa(k, s)`.
pub fn kappa_weight(w: WeightParams, pt: SpectralPoint) -> f64 {
    kappa_weight_reading(w, pt, KappaReading::Adopted)
}

pub fn kappa_weight_reading(w: WeightParams, pt: SpectralPoint, reading: KappaReading) -> f64 {
    let l = kappa_ln(w, pt, reading);
    if l == f64::NEG_INFINITY {
        0.0
    } else {
        l.exp()
    }
}

/// Exponents `e` with `|f| ~ |z|^{e_0}` at 0, `|1-z|^{e_1}` at 1 and
/// `|z|^{e_inf}` at infinity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Behaviour {
    pub at_zero: f64,
    pub at_one: f64,
    pub at_infinity: f64,
}

/// `H_mu(z) = (1-z)^{-a-mu|-a-mu} = |1-z|^{-2a-2mu}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HFunction {
    pub mu: f64,
}

impl HFunction {
    pub fn new(mu: f64) -> Self {
        Self { mu }
    }

    /// `H_mu` lies in `L^2(rho)` iff `0 < 2 mu < 1 - a - b`.
    pub fn in_l2(&self, w: WeightParams) -> bool {
        0.0 < 2.0 * self.mu && 2.0 * self.mu < 1.0 - w.a - w.b
    }

    pub fn eval(&self, w: WeightParams, z: Complex64) -> Complex64 {
        Complex64::new((1.0 - z).norm().powf(-2.0 * (w.a + self.mu)), 0.0)
    }

    /// As [`HFunction::eval`], with `|1-z|` from the node's offset.
    pub fn eval_at(&self, w: WeightParams, p: &PlanePoint) -> Complex64 {
        Complex64::new(p.minus(Complex64::new(1.0, 0.0)).norm().powf(-2.0 * (w.a + self.mu)), 0.0)
    }

    pub fn behaviour(&self, w: WeightParams) -> Behaviour {
        let e = -2.0 * (w.a + self.mu);
        Behaviour { at_zero: 0.0, at_one: e, at_infinity: e }
    }

    /// Closed-form image `J H_mu = G(mu+lambda|mu+lambda') G(mu-lambda|mu-lambda') / (G(a+mu) G(b+mu))`.
    pub fn j_image(&self, w: WeightParams, pt: SpectralPoint) -> GammaValue {
        let m = FieldExponent::symmetric(self.mu);
        gamma_field(m + pt) * gamma_field(m - pt)
            / (gamma_field(FieldExponent::symmetric(w.a + self.mu)) * gamma_field(FieldExponent::symmetric(w.b + self.mu)))
    }
}

/// Exponents of the kernel: bounded at 0 up to `|z|^{2-2a-2b}`, `|1-z|^{min(0, 2b-2a)}`
/// at 1 and `|z|^{-2a}` at infinity (logarithms ignored).
fn kernel_behaviour(w: WeightParams) -> Behaviour {
    Behaviour { at_zero: (2.0 - 2.0 * (w.a + w.b)).min(0.0), at_one: (2.0 * (w.b - w.a)).min(0.0), at_infinity: -2.0 * w.a }
}

fn rho_behaviour(w: WeightParams) -> Behaviour {
    Behaviour { at_zero: 2.0 * (w.a + w.b) - 2.0, at_one: 2.0 * (w.a - w.b), at_infinity: 4.0 * w.a - 2.0 }
}

fn plane_over<F>(f: &F, parts: &[Behaviour], spec: &QuadSpec) -> Result<(Complex64, ErrorBudget)>
where
    F: Fn(&PlanePoint) -> Complex64 + Sync,
{
    let sum = |g: fn(&Behaviour) -> f64| parts.iter().map(g).sum::<f64>();
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let sings = [Singularity::new(zero, sum(|b| b.at_zero)), Singularity::new(one, sum(|b| b.at_one))];
    let opts = PlaneOptions { infinity_exponent: sum(|b| b.at_infinity), parallel: true };
    let (v, b) = integrate_plane_with(f, &sings, opts, spec)?;
    Ok((v / PI, b.scaled(1.0 / PI)))
}

/// `(J f)(k, s) = (1/pi) int K(z; k, s) f(z) rho(z) d^2z` by plane quadrature
/// with the kernel from the series route.
pub fn apply_j<F>(w: WeightParams, f: &F, behaviour: Behaviour, pt: SpectralPoint, spec: &QuadSpec) -> Result<(Complex64, ErrorBudget)>
where
    F: Fn(&PlanePoint) -> Complex64 + Sync,
{
    let failure: Mutex<Option<Error>> = Mutex::new(None);
    let g = |p: &PlanePoint| -> Complex64 {
        let r = rho_weight_at(w, p).and_then(|rho| kernel_k(w.a, w.b, pt, p.z, F21Method::Series, spec).map(|(k, _)| k * rho));
        match r {
            Ok(v) => v * f(p),
            Err(e) => {
                failure.lock().unwrap().get_or_insert(e);
                Complex64::new(0.0, 0.0)
            }
        }
    };
    let out = plane_over(&g, &[behaviour, kernel_behaviour(w), rho_behaviour(w)], spec)?;
    match failure.into_inner().unwrap() {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// `<f, g>` in `L^2(rho)` by plane quadrature.
pub fn inner_rho<F, G>(w: WeightParams, f: &F, fb: Behaviour, g: &G, gb: Behaviour, spec: &QuadSpec) -> Result<(Complex64, ErrorBudget)>
where
    F: Fn(&PlanePoint) -> Complex64 + Sync,
    G: Fn(&PlanePoint) -> Complex64 + Sync,
{
    let h = |p: &PlanePoint| -> Complex64 {
        match rho_weight_at(w, p) {
            Ok(rho) => f(p) * g(p).conj() * rho,
            Err(_) => Complex64::new(0.0, 0.0),
        }
    };
    plane_over(&h, &[fb, gb, rho_behaviour(w)], spec)
}

/// `<H_mu, H_nu> = G(a+b) G(mu+nu) / G(a+b+mu+nu)`, all symmetric pairs.
pub fn inner_rho_h(w: WeightParams, mu: f64, nu: f64) -> GammaValue {
    let g = |x: f64| gamma_field(FieldExponent::symmetric(x));
    g(w.a + w.b) * g(mu + nu) / g(w.a + w.b + mu + nu)
}

/// `<Phi, Psi>` in `L^2(Lambda, kappa)` for the given reading. `model`
/// describes the full summand `kappa Phi conj(Psi)`.
pub fn inner_kappa<P, Q>(
    w: WeightParams,
    phi: &P,
    psi: &Q,
    reading: KappaReading,
    model: &LatticeModel,
    spec: &QuadSpec,
) -> Result<(Complex64, ErrorBudget)>
where
    P: Fn(SpectralPoint) -> Complex64 + Sync,
    Q: Fn(SpectralPoint) -> Complex64 + Sync,
{
    let f = |k: i64, s: f64| {
        let pt = SpectralPoint::new(k, s);
        let kap = kappa_weight_reading(w, pt, reading);
        if kap == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        phi(pt) * psi(pt).conj() * kap
    };
    let r = sum_integral_lattice_with(&f, model, spec)?;
    Ok((r.value / (2.0 * PI), r.budget.scaled(1.0 / (2.0 * PI))))
}

/// Largest growth exponent of `exp(ln_f)` along a few rays of the lattice,
/// from radii `r` and `2r`.
pub fn probe_exponent<L>(ln_f: &L, r: i64) -> f64
where
    L: Fn(SpectralPoint) -> f64,
{
    let rays: [(i64, f64); 4] = [(1, 0.0), (0, 1.0), (1, 1.0), (1, -1.0)];
    rays.iter()
        .map(|&(dk, ds)| {
            let at = |t: i64| ln_f(SpectralPoint::new(dk * t, ds * t as f64));
            (at(2 * r) - at(r)) / 2f64.ln()
        })
        .fold(f64::NEG_INFINITY, |m, p| if p.is_nan() { f64::INFINITY } else { m.max(p) })
}

/// One entry of the unitarity grid.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitarityRow {
    pub mu: f64,
    pub nu: f64,
    pub kappa_side: Complex64,
    pub rho_side: Complex64,
    pub rel_err: f64,
    pub budget: ErrorBudget,
}

/// Compares `<J H_mu, J H_nu>_kappa` (closed-form images) with
/// `<H_mu, H_nu>_rho` (closed form).
pub fn unitarity_check(w: WeightParams, mu: f64, nu: f64, reading: KappaReading, spec: &QuadSpec) -> Result<UnitarityRow> {
    for m in [mu, nu] {
        if !HFunction::new(m).in_l2(w) {
            return Err(Error::Domain(format!("H_{m} is not in L^2(rho) for a={}, b={}", w.a, w.b)));
        }
    }
    let (hm, hn) = (HFunction::new(mu), HFunction::new(nu));
    let phi = |pt: SpectralPoint| hm.j_image(w, pt).value().unwrap_or(Complex64::new(f64::NAN, 0.0));
    let psi = |pt: SpectralPoint| hn.j_image(w, pt).value().unwrap_or(Complex64::new(f64::NAN, 0.0));
    let model = match reading {
        // The summand is then a quarter of the four-parameter integrand,
        // even in k and in s separately.
        KappaReading::Adopted => LatticeModel {
            exponent: Complex64::new(4.0 * (w.a + w.b + mu + nu) - 6.0, 0.0),
            line_frequency: 0.0,
            k_tail: KTail::Fit { step: 2, terms: 4 },
            even_k: true,
            even_s: true,
        },
        _ => {
            let ln_f = |pt: SpectralPoint| kappa_ln(w, pt, reading) + hm.j_image(w, pt).ln_modulus() + hn.j_image(w, pt).ln_modulus();
            let p = probe_exponent(&ln_f, 64);
            if !(p < -2.0) {
                return Err(Error::NonDecay(format!("{} reading: summand grows like |lambda|^{p:.3}", reading.name())));
            }
            LatticeModel { exponent: Complex64::new(p, 0.0), ..LatticeModel::algebraic(p) }
        }
    };
    let (kv, budget) = inner_kappa(w, &phi, &psi, reading, &model, spec)?;
    if !(kv.re.is_finite() && kv.im.is_finite()) {
        return Err(Error::NonDecay(format!("{} reading: non-finite pairing", reading.name())));
    }
    let rv = inner_rho_h(w, mu, nu).value()?;
    Ok(UnitarityRow { mu, nu, kappa_side: kv, rho_side: rv, rel_err: (kv - rv).norm() / rv.norm(), budget })
}

/// Outcome of one reading over a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ReadingOutcome {
    pub reading: KappaReading,
    /// Worst relative error, or the failure that prevented evaluation.
    pub worst: std::result::Result<f64, String>,
    pub passes: bool,
}

/// Runs the unitarity grid under every reading of `kappa`.
///
/// For `a = b` the printed reading has the same modulus as the adopted one
/// at every lattice point, so the weights should include a pair with `a != b`.
pub fn disambiguate_kappa(ws: &[WeightParams], mus: &[f64], nus: &[f64], tol: f64, spec: &QuadSpec) -> Vec<ReadingOutcome> {
    KappaReading::ALL
        .iter()
        .map(|&reading| {
            let mut worst = Ok(0.0f64);
            'grid: for (&w, &mu, &nu) in ws.iter().flat_map(|w| mus.iter().flat_map(move |m| nus.iter().map(move |n| (w, m, n)))) {
                match unitarity_check(w, mu, nu, reading, spec) {
                    Ok(row) => {
                        if let Ok(m) = worst.as_mut() {
                            *m = m.max(row.rel_err);
                        }
                    }
                    Err(e) => {
                        worst = Err(e.to_string());
                        break 'grid;
                    }
                }
            }
            let passes = matches!(worst, Ok(m) if m <= tol);
            ReadingOutcome { reading, worst, passes }
        })
        .collect()
}
