//! Quadrature and summation engines with explicit error accounting.
//!
//! Every engine returns a value together with an [`ErrorBudget`]. Parallel
//! evaluation never changes results: work items are evaluated independently
//! and then reduced in a fixed order with compensated summation.

pub mod gk;
pub mod lattice;
pub mod line;
pub mod plane;
pub mod sum;
pub mod tail;
pub mod tanh_sinh;

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::ops::{Add, AddAssign};

pub use gk::{adaptive, Integral, Tolerance};
pub use lattice::{
    sum_bilateral, sum_bilateral_with, sum_integral_lattice, sum_integral_lattice_with, BilateralModel, KTail, LatticeModel, LatticeResult,
};
pub use line::{integrate_half_line, integrate_line, integrate_line_with, LineModel};
pub use plane::{integrate_plane, integrate_plane_with, PlaneOptions, PlanePoint, Singularity};
pub use sum::{compensated_sum, CompensatedSum};
pub use tail::hurwitz_zeta;

/// Precision and truncation policy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QuadSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    /// Line cutoff `S`.
    pub line_cutoff: f64,
    /// Lattice cutoff `K`.
    pub lattice_cutoff: i64,
    /// Algebraic tail model `|t|^p` for engines without a better model.
    pub decay_exponent: f64,
}

impl Default for QuadSpec {
    fn default() -> Self {
        Self { rel_tol: 1e-10, abs_tol: 1e-15, max_subdivisions: 4000, line_cutoff: 1e4, lattice_cutoff: 256, decay_exponent: -2.0 }
    }
}

impl QuadSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(Error::InvalidParameter("rel_tol and abs_tol must be positive".into()));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::InvalidParameter("max_subdivisions must be positive".into()));
        }
        if !(self.line_cutoff > 0.0) || self.lattice_cutoff < 1 {
            return Err(Error::InvalidParameter("cutoffs must be positive".into()));
        }
        Ok(())
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_cutoffs(mut self, line: f64, lattice: i64) -> Self {
        self.line_cutoff = line;
        self.lattice_cutoff = lattice;
        self
    }

    pub(crate) fn tolerance(&self) -> Tolerance {
        Tolerance { rel: self.rel_tol, abs: self.abs_tol, l1_rel: self.rel_tol * 1e-2, max_subdivisions: self.max_subdivisions }
    }
}

/// Error estimate split by origin.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ErrorBudget {
    #[serde(rename = "quadrature")]
    pub quadrature_error: f64,
    #[serde(rename = "tail")]
    pub tail_error: f64,
    #[serde(rename = "rounding")]
    pub rounding_estimate: f64,
}

impl ErrorBudget {
    pub fn new(quadrature_error: f64, tail_error: f64, rounding_estimate: f64) -> Self {
        Self { quadrature_error, tail_error, rounding_estimate }
    }

    pub fn total(&self) -> f64 {
        self.quadrature_error + self.tail_error + self.rounding_estimate
    }

    pub fn scaled(self, f: f64) -> Self {
        let f = f.abs();
        Self::new(self.quadrature_error * f, self.tail_error * f, self.rounding_estimate * f)
    }
}

impl Add for ErrorBudget {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.quadrature_error + o.quadrature_error, self.tail_error + o.tail_error, self.rounding_estimate + o.rounding_estimate)
    }
}

impl AddAssign for ErrorBudget {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}
