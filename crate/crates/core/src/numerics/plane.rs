//! Integrals over the whole complex plane with algebraic singularities.
//!
//! The plane is split by a smooth partition of unity
//! `w_j = d_j^{-4} / sum_i d_i^{-4}` (`d_i` the distance to singular point
//! `i`), so piece `j` is singular only at its own centre. Each piece is
//! integrated in polar coordinates around its centre:
//!
//! * near the centre, `r = r0 v^{1/(sigma+2)}` absorbs the `r^sigma` power;
//! * in the middle, adaptive Gauss–Kronrod with breaks at the radii of the
//!   other singular points;
//! * beyond `R`, the inversion `r = R v^{1/(sigma_inf+2)}` absorbs the decay.
//!
//! The angular integral uses adaptive Gauss–Kronrod with breaks at the
//! directions of the other singular points.

use super::gk::{adaptive, adaptive_partial, Tolerance};
use super::sum::CompensatedSum;
use super::tanh_sinh::tanh_sinh;
use super::{ErrorBudget, QuadSpec};
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::Mutex;

/// `|f(z)| ~ |z - point|^exponent` near `point`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Singularity {
    pub point: Complex64,
    pub exponent: f64,
}

impl Singularity {
    pub fn new(point: Complex64, exponent: f64) -> Self {
        Self { point, exponent }
    }
}

/// A sample point `z = centre + offset` of the patch being integrated.
///
/// Integrands should form differences `z - p` through [`PlanePoint::minus`]:
/// when `p` is the patch centre the offset is returned exactly, which keeps
/// `|z - p|^sigma` accurate at distances far below machine epsilon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanePoint {
    pub z: Complex64,
    centre: Complex64,
    offset: Complex64,
}

impl PlanePoint {
    pub fn new(centre: Complex64, offset: Complex64) -> Self {
        Self { z: centre + offset, centre, offset }
    }

    /// `z - p`.
    #[inline]
    pub fn minus(&self, p: Complex64) -> Complex64 {
        if p == self.centre {
            self.offset
        } else {
            self.z - p
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneOptions {
    /// `|f(z)| ~ |z|^sigma` as `|z| -> inf`; must be below -2.
    pub infinity_exponent: f64,
    /// Evaluate radial nodes on the rayon pool. Results are identical either way.
    pub parallel: bool,
}

const PARTITION_POWER: i32 = 4;

/// `int_C f(z) d^2 z` (Lebesgue measure; callers divide by `pi` for the
/// normalised measure).
pub fn integrate_plane<F>(f: &F, singularities: &[Singularity], infinity_exponent: f64, spec: &QuadSpec) -> Result<(Complex64, ErrorBudget)>
where
    F: Fn(&PlanePoint) -> Complex64 + Sync,
{
    integrate_plane_with(f, singularities, PlaneOptions { infinity_exponent, parallel: true }, spec)
}

pub fn integrate_plane_with<F>(f: &F, singularities: &[Singularity], opts: PlaneOptions, spec: &QuadSpec) -> Result<(Complex64, ErrorBudget)>
where
    F: Fn(&PlanePoint) -> Complex64 + Sync,
{
    spec.validate()?;
    let mut pts: Vec<Singularity> = singularities.to_vec();
    if pts.is_empty() {
        pts.push(Singularity::new(Complex64::new(0.0, 0.0), 0.0));
    }
    for s in &pts {
        if !(s.exponent > -2.0) {
            return Err(Error::NonIntegrable { point: format!("{}", s.point), exponent: s.exponent });
        }
    }
    if !(opts.infinity_exponent < -2.0) {
        return Err(Error::NonIntegrable { point: "infinity".into(), exponent: opts.infinity_exponent });
    }
    for i in 0..pts.len() {
        for j in 0..i {
            if (pts[i].point - pts[j].point).norm() < 1e-13 * (1.0 + pts[i].point.norm()) {
                return Err(Error::InvalidParameter(format!("coincident singular points at {}", pts[i].point)));
            }
        }
    }

    let first_error: Mutex<Option<Error>> = Mutex::new(None);
    let mut total = CompensatedSum::new();
    let mut budget = ErrorBudget::default();
    for j in 0..pts.len() {
        let (v, b) = piece(f, &pts, j, opts, spec, &first_error)?;
        total.add(v);
        budget += b;
    }
    if let Some(e) = first_error.into_inner().unwrap() {
        return Err(e);
    }
    budget.rounding_estimate += total.rounding_estimate();
    Ok((total.value(), budget))
}

fn piece<F>(
    f: &F,
    pts: &[Singularity],
    j: usize,
    opts: PlaneOptions,
    spec: &QuadSpec,
    first_error: &Mutex<Option<Error>>,
) -> Result<(Complex64, ErrorBudget)>
where
    F: Fn(&PlanePoint) -> Complex64 + Sync,
{
    let centre = pts[j].point;
    let sigma = pts[j].exponent;
    let others: Vec<Complex64> = pts.iter().enumerate().filter(|(i, _)| *i != j).map(|(_, p)| p.point).collect();
    let mut dists: Vec<f64> = others.iter().map(|p| (p - centre).norm()).collect();
    dists.sort_by(f64::total_cmp);
    dists.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * *b);
    let r_near = 0.5 * dists.first().copied().unwrap_or(1.0);
    let r_far = 2.0 * dists.last().copied().unwrap_or(1.0);

    let mut dirs: Vec<f64> = others.iter().map(|p| (p - centre).arg()).collect();
    dirs.sort_by(f64::total_cmp);
    dirs.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    let angle_breaks: Vec<f64> = if dirs.is_empty() {
        vec![0.0, PI, 2.0 * PI]
    } else {
        let mut b = dirs.clone();
        b.push(dirs[0] + 2.0 * PI);
        if b.len() == 2 {
            b.insert(1, dirs[0] + PI);
        }
        b
    };

    let weight = |p: &PlanePoint| -> f64 {
        let dj = p.offset.norm();
        let mut s = 1.0;
        for o in &others {
            let di = (p.z - o).norm();
            if di == 0.0 {
                return 0.0;
            }
            s += (dj / di).powi(PARTITION_POWER);
        }
        1.0 / s
    };
    let ring_noise = Mutex::new(0.0f64);
    let inner_tol =
        Tolerance { rel: 0.1 * spec.rel_tol, abs: spec.abs_tol * 1e-3, l1_rel: 1e-3 * spec.rel_tol, max_subdivisions: spec.max_subdivisions };
    // r * int_0^{2 pi} f(centre + r e^{i phi}) w_j dphi
    let ring = |r: f64| -> Complex64 {
        if r == 0.0 || !r.is_finite() {
            return Complex64::new(0.0, 0.0);
        }
        let g = |phi: f64| {
            let p = PlanePoint::new(centre, Complex64::from_polar(r, phi));
            let w = weight(&p);
            if w == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                f(&p) * w
            }
        };
        match adaptive_partial(&g, &angle_breaks, inner_tol, false) {
            (res, None) => res.value * r,
            // Rounding noise in f (for instance near a singular point given
            // only to absolute precision) can stall the ring. A moderately
            // resolved ring is kept and its relative error recorded.
            (res, Some(e)) => {
                if res.error <= 1e-3 * res.l1 {
                    let rel = res.error / res.l1.max(f64::MIN_POSITIVE);
                    let mut n = ring_noise.lock().unwrap();
                    *n = n.max(rel);
                } else {
                    first_error.lock().unwrap().get_or_insert(e);
                }
                res.value * r
            }
        }
    };

    let mut budget = ErrorBudget::default();
    let mut acc = CompensatedSum::new();

    // Near: r = r0 v^{1/(sigma+2)}, r dr = r0^2/(sigma+2) v^{2/(sigma+2)-1} dv.
    let (near, near_err) = absorbed(&ring, r_near, sigma, spec, opts.parallel)?;
    acc.add(near);
    budget.quadrature_error += near_err;

    // Middle.
    let mut breaks = vec![r_near];
    breaks.extend(dists.iter().copied().filter(|&d| d > r_near && d < r_far));
    breaks.push(r_far);
    let mid = adaptive(&|r: f64| ring(r), &breaks, spec.tolerance(), opts.parallel)?;
    acc.add(mid.value);
    budget.quadrature_error += mid.error;

    // Far: same map with the decay exponent.
    let (far, far_err) = absorbed(&ring, r_far, opts.infinity_exponent, spec, opts.parallel)?;
    acc.add(far);
    budget.tail_error += far_err;

    let value = acc.value();
    budget.quadrature_error += inner_tol.rel.max(ring_noise.into_inner().unwrap()) * value.norm();
    budget.rounding_estimate += acc.rounding_estimate();
    Ok((value, budget))
}

/// `int r g(r) dr` over `[0, r0]` (sigma > -2) or `[r0, inf)` (sigma < -2),
/// where `ring(r) = r g(r)` and `g ~ r^sigma` at the open end.
fn absorbed<R>(ring: &R, r0: f64, sigma: f64, spec: &QuadSpec, par: bool) -> Result<(Complex64, f64)>
where
    R: Fn(f64) -> Complex64 + Sync,
{
    // r = r0 v^beta, |dr| = r0 |beta| v^{beta-1} dv; ring ~ r^{sigma+1} makes
    // the transformed integrand bounded at v = 0.
    let beta = 1.0 / (sigma + 2.0);
    // The transformed integrand tends to a constant as v -> 0. Below v_cut
    // (where r leaves [1e-140 r0, 1e140 r0]) that constant is used, which
    // keeps r^sigma representable.
    let v_cut = 10f64.powf(-140.0 / beta.abs());
    let h = |v: f64| -> Complex64 {
        let v = v.max(v_cut);
        let r = r0 * v.powf(beta);
        if r == 0.0 || !r.is_finite() {
            return Complex64::new(0.0, 0.0);
        }
        let jac = r0 * beta.abs() * v.powf(beta - 1.0);
        if !jac.is_finite() {
            return Complex64::new(0.0, 0.0);
        }
        let g = ring(r);
        if g == Complex64::new(0.0, 0.0) {
            return g;
        }
        g * jac
    };
    tanh_sinh(&h, 0.0, 1.0, spec.rel_tol, spec.abs_tol, par)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{beta_field, field_power_unchecked, FieldExponent};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn gaussian_plane() {
        let f = |p: &PlanePoint| Complex64::new((-p.z.norm_sqr()).exp(), 0.0);
        let (v, _) = integrate_plane(&f, &[], -50.0, &QuadSpec::default()).unwrap();
        assert!((v.re - PI).abs() < 1e-10, "{v}");
    }

    #[test]
    fn disc_with_inverse_radius() {
        let f = |p: &PlanePoint| Complex64::new(if p.z.norm() < 1.0 { 1.0 / p.z.norm() } else { 0.0 }, 0.0);
        let spec = QuadSpec { rel_tol: 1e-9, ..QuadSpec::default() };
        let (v, _) = integrate_plane(&f, &[Singularity::new(c(0.0, 0.0), -1.0)], -50.0, &spec).unwrap();
        assert!((v.re / PI - 2.0).abs() < 1e-8, "{}", v.re / PI);
    }

    #[test]
    fn beta_integral_symmetric() {
        let e = FieldExponent::symmetric(0.3);
        let f = |p: &PlanePoint| field_power_unchecked(p.z, e - 1.0) * field_power_unchecked(-p.minus(c(1.0, 0.0)), e - 1.0);
        let sings = [Singularity::new(c(0.0, 0.0), -1.4), Singularity::new(c(1.0, 0.0), -1.4)];
        let spec = QuadSpec { rel_tol: 1e-9, ..QuadSpec::default() };
        let (v, _) = integrate_plane(&f, &sings, -2.8, &spec).unwrap();
        let want = beta_field(e, e).value().unwrap();
        assert!((v / PI - want).norm() < 1e-7 * want.norm(), "{} vs {want}", v / PI);
    }

    #[test]
    fn beta_integral_with_phase() {
        let e1 = FieldExponent::new(c(0.6, 0.0), 1);
        let e2 = FieldExponent::symmetric(0.3);
        let f = |p: &PlanePoint| field_power_unchecked(p.z, e1 - 1.0) * field_power_unchecked(-p.minus(c(1.0, 0.0)), e2 - 1.0);
        let sings = [Singularity::new(c(0.0, 0.0), 2.0 * e1.bracket() - 2.0), Singularity::new(c(1.0, 0.0), -1.4)];
        let spec = QuadSpec { rel_tol: 1e-9, ..QuadSpec::default() };
        let (v, _) = integrate_plane(&f, &sings, 2.0 * (e1.bracket() + e2.bracket()) - 4.0, &spec).unwrap();
        let want = beta_field(e1, e2).value().unwrap();
        assert!((v / PI - want).norm() < 1e-7 * want.norm(), "{} vs {want}", v / PI);
    }

    #[test]
    fn rejects_non_integrable() {
        let f = |_p: &PlanePoint| c(1.0, 0.0);
        assert!(matches!(integrate_plane(&f, &[Singularity::new(c(0.0, 0.0), -2.0)], -3.0, &QuadSpec::default()), Err(Error::NonIntegrable { .. })));
        assert!(integrate_plane(&f, &[], -1.5, &QuadSpec::default()).is_err());
    }

    #[test]
    fn parallel_is_bit_identical() {
        let e = FieldExponent::symmetric(0.35);
        let f = |p: &PlanePoint| field_power_unchecked(p.z, e - 1.0) * field_power_unchecked(-p.minus(c(1.0, 0.0)), e - 1.0);
        let sings = [Singularity::new(c(0.0, 0.0), -1.3), Singularity::new(c(1.0, 0.0), -1.3)];
        let spec = QuadSpec { rel_tol: 1e-6, ..QuadSpec::default() };
        let a = integrate_plane_with(&f, &sings, PlaneOptions { infinity_exponent: -2.6, parallel: false }, &spec).unwrap().0;
        let b = integrate_plane_with(&f, &sings, PlaneOptions { infinity_exponent: -2.6, parallel: true }, &spec).unwrap().0;
        assert_eq!(a, b);
    }
}
