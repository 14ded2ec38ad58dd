//! Sum-integrals `I = (1/2 pi i) sum_k int prod G^C(a+x) prod G^C(b-x) z^x dsigma`,
//! `x = (k+sigma)/2 | (-k+sigma)/2`, along `Re sigma = c0`.

use crate::error::{Error, Result};
use crate::field::{field_power_ln, gamma_field, FieldExponent, GammaValue};
use crate::numerics::{sum_integral_lattice_with, ErrorBudget, KTail, LatticeModel, QuadSpec};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Factor data of a Barnes–Ismagilov integral.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaFactorList {
    /// `a` in factors `G^C(a + x)`.
    pub upper: Vec<FieldExponent>,
    /// `b` in factors `G^C(b - x)`.
    pub lower: Vec<FieldExponent>,
    pub z: Complex64,
    /// Abscissa `Re sigma` of the contour; must separate the two pole families.
    pub contour: f64,
    /// Extra polynomial factor `k^2 - sigma^2`.
    pub plancherel_weight: bool,
}

impl GammaFactorList {
    pub fn new(upper: Vec<FieldExponent>, lower: Vec<FieldExponent>, z: Complex64) -> Self {
        Self { upper, lower, z, contour: 0.0, plancherel_weight: false }
    }

    pub fn with_contour(mut self, c0: f64) -> Self {
        self.contour = c0;
        self
    }

    pub fn with_plancherel_weight(mut self) -> Self {
        self.plancherel_weight = true;
        self
    }

    fn check(&self) -> Result<()> {
        if self.upper.len() > self.lower.len() {
            return Err(Error::InvalidParameter(format!("need p <= q, got p = {}, q = {}", self.upper.len(), self.lower.len())));
        }
        if self.z == Complex64::new(0.0, 0.0) || !self.contour.is_finite() {
            return Err(Error::InvalidParameter("need z != 0 and a finite contour".into()));
        }
        let half = 0.5 * self.contour;
        for a in &self.upper {
            if a.bracket() + half <= 0.0 {
                return Err(Error::Domain(format!("contour Re sigma = {} meets poles of G^C({a} + x)", self.contour)));
            }
        }
        for b in &self.lower {
            if b.bracket() - half <= 0.0 {
                return Err(Error::Domain(format!("contour Re sigma = {} meets poles of G^C({b} - x)", self.contour)));
            }
        }
        Ok(())
    }
}

/// Joint decay exponent of the integrand in `|k + i Im sigma|`.
pub fn barnes_ismagilov_exponent(f: &GammaFactorList) -> Complex64 {
    let c0 = f.contour;
    let up: Complex64 = f.upper.iter().map(|a| 2.0 * a.centre() + c0 - 1.0).sum();
    let lo: Complex64 = f.lower.iter().map(|b| 2.0 * b.centre() - c0 - 1.0).sum();
    up + lo + if f.plancherel_weight { 2.0 } else { 0.0 }
}

/// Evaluates the sum-integral with `sigma = c0 + is`, i.e. `(1/2 pi) sum_k int ds`.
pub fn barnes_ismagilov_eval(f: &GammaFactorList, spec: &QuadSpec) -> Result<(Complex64, ErrorBudget)> {
    spec.validate()?;
    f.check()?;
    let exponent = barnes_ismagilov_exponent(f);
    let on_circle = (f.z.norm() - 1.0).abs() < 1e-12;
    if on_circle && exponent.re >= -2.0 {
        return Err(Error::NonDecay(format!("joint decay exponent {} must be below -2", exponent.re)));
    }
    let c0 = f.contour;
    let integrand = |k: i64, s: f64| -> Complex64 {
        let x = FieldExponent::new(Complex64::new(0.5 * (k as f64 + c0), 0.5 * s), k);
        let mut g = GammaValue::one();
        for &a in &f.upper {
            g = g * gamma_field(a + x);
        }
        for &b in &f.lower {
            g = g * gamma_field(b - x);
        }
        let (lnz, unit) = field_power_ln(f.z, x);
        let mut v = match g {
            GammaValue::Finite { log_modulus, phase } => (Complex64::new(log_modulus, 0.0) + lnz).exp() * phase * unit,
            _ => Complex64::new(0.0, 0.0),
        };
        if f.plancherel_weight {
            let sigma = Complex64::new(c0, s);
            v *= (k * k) as f64 - sigma * sigma;
        }
        v
    };
    let k_tail = if !on_circle {
        KTail::Geometric
    } else if (f.z - 1.0).norm() < 1e-12 {
        KTail::Fit { step: 1, terms: 4 }
    } else {
        KTail::Truncate
    };
    let ln_abs_z = f.z.norm().ln();
    let model = LatticeModel { exponent, line_frequency: ln_abs_z, k_tail, even_k: false, even_s: false };
    let mut spec = *spec;
    if !on_circle {
        spec.line_cutoff = spec.line_cutoff.min((60.0 / ln_abs_z.abs()).max(200.0));
    }
    let r = sum_integral_lattice_with(&integrand, &model, &spec)?;
    Ok((r.value / (2.0 * PI), r.budget.scaled(1.0 / (2.0 * PI))))
}
