use cfield::field::{field_power, gamma_field, gamma_field_alt, FieldExponent, GammaValue, SpectralPoint};
use cfield::hyper::{kernel_k, F21Method};
use cfield::identities::main_integrand;
use cfield::index::{kappa_weight, rho_weight, WeightParams};
use cfield::{Complex64, QuadSpec};
use proptest::prelude::*;
use std::f64::consts::PI;

fn pole_distance(x: Complex64) -> f64 {
    (x - x.re.round().min(0.0)).norm()
}

/// `a|a'` with `a`, `a'`, `1-a`, `1-a'` at least 0.1 from the poles.
fn lattice_point() -> impl Strategy<Value = FieldExponent> {
    (-6.0..6.0f64, -3.0..3.0f64, -6i64..=6).prop_map(|(re, im, d)| FieldExponent::new(Complex64::new(re, im), d)).prop_filter("near a pole", |e| {
        let (a, ap) = (e.a, e.a_prime());
        [a, ap, 1.0 - a, 1.0 - ap].iter().all(|&x| pole_distance(x) >= 0.1)
    })
}

fn spectral_point() -> impl Strategy<Value = SpectralPoint> {
    (-30i64..=30, -30.0..30.0f64).prop_map(|(k, s)| SpectralPoint::new(k, s))
}

fn rel(x: Complex64, y: Complex64) -> f64 {
    (x - y).norm() / y.norm()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn reflection(e in lattice_point()) {
        let lhs = (gamma_field(e) * gamma_field(FieldExponent::symmetric(1.0) - e)).value().unwrap();
        let rhs = Complex64::new(if e.delta % 2 == 0 { 1.0 } else { -1.0 }, 0.0);
        prop_assert!(rel(lhs, rhs) <= 1e-12, "{e}: {lhs}");
    }

    #[test]
    fn two_expressions_agree(e in lattice_point()) {
        let v1 = gamma_field(e).value().unwrap();
        let v2 = gamma_field_alt(e).value().unwrap();
        prop_assert!(rel(v1, v2) <= 1e-12, "{e}: {v1} vs {v2}");
    }

    #[test]
    fn gamma_value_parts(e in lattice_point()) {
        if let GammaValue::Finite { log_modulus, phase } = gamma_field(e) {
            prop_assert!((phase.norm() - 1.0).abs() < 1e-15);
            let v = gamma_field(e).value().unwrap();
            prop_assert!((v.norm().ln() - log_modulus).abs() < 1e-13);
        } else {
            prop_assert!(false, "finite point {e} gave {:?}", gamma_field(e));
        }
    }

    #[test]
    fn modulus_symmetry(a in -2.9..2.9f64, pt in spectral_point()) {
        let base = FieldExponent::symmetric(a);
        let (plus, minus) = (gamma_field(base + pt), gamma_field(base - pt));
        prop_assume!(plus.is_finite() && minus.is_finite());
        let (lp, lm) = (plus.ln_modulus(), minus.ln_modulus());
        prop_assume!(lp.is_finite() && lm.is_finite());
        prop_assert!((lp - lm).abs() <= 1e-12 * lp.abs().max(1.0), "a={a}, {pt:?}: {lp} vs {lm}");
    }

    #[test]
    fn field_power_has_unit_modulus_on_the_unitary_lattice(pt in spectral_point(), r in -8.0..8.0f64, phi in -PI..PI) {
        let z = Complex64::from_polar(r.exp(), phi);
        let v = field_power(z, pt.to_exponent()).unwrap();
        prop_assert!((v.norm() - 1.0).abs() <= 1e-15, "{pt:?} at {z}: |v| - 1 = {}", v.norm() - 1.0);
    }

    #[test]
    fn index_difference_stays_integral(a in -3.0..3.0f64, b in -3.0..3.0f64, d in -5i64..=5) {
        let e = FieldExponent::from_pair(Complex64::new(a, b), Complex64::new(a - d as f64, b)).unwrap();
        prop_assert_eq!(e.delta, d);
        prop_assert!(FieldExponent::from_pair(Complex64::new(a, b), Complex64::new(a + 0.5, b)).is_err());
    }

    #[test]
    fn kappa_is_even_and_nonnegative(a in 0.01..0.45f64, b in 0.01..0.45f64, pt in spectral_point()) {
        let w = WeightParams::new(a, b).unwrap();
        let (k1, k2) = (kappa_weight(w, pt), kappa_weight(w, pt.reflect()));
        prop_assert!(k1 >= 0.0);
        prop_assert!((k1 - k2).abs() <= 1e-12 * k1.max(f64::MIN_POSITIVE), "{k1} vs {k2}");
    }

    #[test]
    fn rho_is_nonnegative(a in 0.01..0.45f64, b in 0.01..0.45f64, r in -5.0..5.0f64, phi in -PI..PI) {
        let w = WeightParams::new(a, b).unwrap();
        let z = Complex64::from_polar(r.exp(), phi);
        prop_assume!((z - 1.0).norm() > 1e-9);
        prop_assert!(rho_weight(w, z).unwrap() >= 0.0);
    }

    #[test]
    fn main_integrand_is_a_square(a in proptest::array::uniform4(0.01..0.24f64), k in -40i64..=40, s in -40.0..40.0f64) {
        let a = a.map(|x| Complex64::new(x, 0.0));
        let v = main_integrand(&a, k, s);
        prop_assert!(v.im == 0.0 && v.re >= 0.0, "{v}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kernel_is_even(a in 0.05..0.4f64, b in 0.05..0.4f64, k in -6i64..=6, s in -4.0..4.0f64, r in -2.0..2.0f64, phi in -3.1..3.1f64) {
        let pt = SpectralPoint::new(k, s);
        let z = Complex64::from_polar(r.exp(), phi);
        let spec = QuadSpec::default();
        let v1 = kernel_k(a, b, pt, z, F21Method::Series, &spec);
        let v2 = kernel_k(a, b, pt.reflect(), z, F21Method::Series, &spec);
        prop_assume!(v1.is_ok());
        let (v1, v2) = (v1.unwrap().0, v2.unwrap().0);
        prop_assert!((v1 - v2).norm() <= 1e-12 * v1.norm(), "{v1} vs {v2}");
    }
}
