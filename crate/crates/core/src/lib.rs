//! Gamma, beta and Gauss hypergeometric functions of the complex field,
//! Mellin analysis on the punctured plane, the index transform `J_{a,b}`,
//! and numerical verification of the associated beta integrals.
//!
//! Conventions: a parameter pair `a|a'` has `a - a'` an integer; the field
//! power is `z^{a|a'} = z^a conj(z)^{a'}`; plane integrals use the
//! normalised measure `d^2 z / pi` unless stated otherwise.

pub mod classical;
pub mod diff_ops;
pub mod error;
pub mod field;
pub mod hyper;
pub mod identities;
pub mod index;
pub mod lgamma;
pub mod mellin;
pub mod numerics;
pub mod sampling;

pub use error::{Error, Result};
pub use field::{
    beta_converges, beta_field, field_power, gamma_asymptotic, gamma_field, in_theorem_domain, in_theorem_domain_real, FieldExponent, GammaValue,
    SpectralPoint,
};
pub use num_complex::Complex64;
pub use numerics::{ErrorBudget, QuadSpec};
