use crate::numerics::ErrorBudget;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Floor for the denominator of the relative error.
pub const ABS_FLOOR: f64 = 1e-300;

/// A complex number serialised as `{"re": .., "im": ..}`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CValue {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for CValue {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

impl From<CValue> for Complex64 {
    fn from(v: CValue) -> Self {
        Complex64::new(v.re, v.im)
    }
}

/// Outcome of one identity check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub command: String,
    pub params: BTreeMap<String, String>,
    pub lhs: CValue,
    pub rhs: CValue,
    pub abs_err: f64,
    pub rel_err: f64,
    pub budget: ErrorBudget,
    pub wall_ms: f64,
    /// Largest lattice index summed explicitly (0 when not applicable).
    pub k_cutoff: i64,
    /// Line cutoff (0 when not applicable).
    pub s_cutoff: f64,
    /// Named auxiliary numbers (e.g. discrepancy ratios).
    #[serde(default)]
    pub extra: BTreeMap<String, f64>,
    /// Human-readable flags.
    #[serde(default)]
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn new(command: &str, lhs: Complex64, rhs: Complex64, budget: ErrorBudget) -> Self {
        let abs_err = (lhs - rhs).norm();
        Self {
            command: command.to_string(),
            params: BTreeMap::new(),
            lhs: lhs.into(),
            rhs: rhs.into(),
            abs_err,
            rel_err: abs_err / rhs.norm().max(ABS_FLOOR),
            budget,
            wall_ms: 0.0,
            k_cutoff: 0,
            s_cutoff: 0.0,
            extra: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    pub fn param(mut self, name: &str, value: impl ToString) -> Self {
        self.params.insert(name.to_string(), value.to_string());
        self
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.rel_err.is_finite() && self.rel_err <= tol
    }

    pub fn lhs(&self) -> Complex64 {
        self.lhs.into()
    }

    pub fn rhs(&self) -> Complex64 {
        self.rhs.into()
    }
}

/// Formats a complex number as `re+im i`, round-trip exact.
pub fn fmt_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.im.is_sign_negative() {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}
