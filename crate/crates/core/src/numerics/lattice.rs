//! Sums over `k in Z` of line integrals in `s`, and bilateral series.
//!
//! Slices `h(k) = int F(k, s) ds` are computed concurrently, collected in
//! index order and reduced with compensated summation, so results do not
//! depend on the number of worker threads. Tails beyond the cutoff are
//! extrapolated from the asymptotic model rather than only bounded.

use super::gk::Tolerance;
use super::line::{integrate_half_line, integrate_line_with, LineModel};
use super::sum::CompensatedSum;
use super::tail::fitted_power_tail;
use super::{ErrorBudget, QuadSpec};
use crate::error::{Error, Result};
use num_complex::Complex64;
use rayon::prelude::*;

/// How slices behave for large `|k|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KTail {
    /// `h(k) ~ |k|^q sum_{j<terms} C_j |k|^{-j step}` with `q = exponent + 1`
    /// (or `q = exponent` for plain series). Fitted on `K, K/2, K/4, ...`.
    Fit { step: u32, terms: usize },
    /// Exponential decay; summation stops once slices are negligible.
    Geometric,
    /// Plain truncation at `K`; the tail is only bounded.
    Truncate,
}

/// Asymptotic information about a lattice integrand `F(k, s)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeModel {
    /// Joint decay `|F| ~ |k + is|^p`; `p` may be complex (slowly turning phase).
    pub exponent: Complex64,
    /// `F(k, s) ~ |s|^p e^{i w s}` along each line.
    pub line_frequency: f64,
    pub k_tail: KTail,
    /// `h(-k) = h(k)`; holds when `F(-k, s) = F(k, s)` or `F(-k, -s) = F(k, s)`.
    pub even_k: bool,
    /// `F(k, -s) = F(k, s)`.
    pub even_s: bool,
}

impl LatticeModel {
    pub fn algebraic(p: f64) -> Self {
        Self { exponent: Complex64::new(p, 0.0), line_frequency: 0.0, k_tail: KTail::Fit { step: 1, terms: 5 }, even_k: false, even_s: false }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct LatticeResult {
    pub value: Complex64,
    pub budget: ErrorBudget,
    /// Largest `|k|` summed explicitly.
    pub k_max: i64,
    /// Line cutoff used in each slice.
    pub s_max: f64,
}

fn slice<F>(f: &F, k: i64, model: &LatticeModel, big_s: f64, tol: Tolerance) -> Result<(Complex64, ErrorBudget)>
where
    F: Fn(i64, f64) -> Complex64 + Sync,
{
    let line = LineModel { exponent: model.exponent, frequency: model.line_frequency };
    let g = |s: f64| f(k, s);
    if model.even_s {
        let (v, b) = integrate_half_line(&g, line, big_s, tol, false)?;
        Ok((v * 2.0, b.scaled(2.0)))
    } else {
        integrate_line_with(&g, line, big_s, tol, false)
    }
}

fn slices<F>(f: &F, ks: &[i64], model: &LatticeModel, big_s: f64, tol: Tolerance) -> Result<Vec<(Complex64, ErrorBudget)>>
where
    F: Fn(i64, f64) -> Complex64 + Sync,
{
    ks.par_iter().map(|&k| slice(f, k, model, big_s, tol)).collect()
}

/// Fitted tail over `k > K` of the values `h[0..=K]` (indexed by `|k|`).
fn side_tail(h: &[Complex64], q: Complex64, step: u32, terms: usize) -> Result<(Complex64, f64)> {
    let big_k = h.len() - 1;
    let mut terms = terms;
    while terms > 1 && (big_k >> (terms - 1)) < 8 {
        terms -= 1;
    }
    let pts = |n: usize| -> Vec<(f64, Complex64)> { (0..n).map(|m| big_k >> m).map(|k| (k as f64, h[k])).collect() };
    if h[big_k].norm() == 0.0 && h[big_k / 2].norm() == 0.0 {
        return Ok((Complex64::new(0.0, 0.0), 0.0));
    }
    // Local slope check: the sampled tail must decay faster than 1/k.
    let (hk, hk2) = (h[big_k].norm(), h[big_k / 2].norm());
    if hk2 > 0.0 && hk > 0.0 {
        let slope = (hk / hk2).ln() / 2f64.ln();
        if slope > -1.0 && hk > 1e-300 {
            return Err(Error::NonDecay(format!("slices decay like k^{slope:.3} near k = {big_k}")));
        }
    }
    let full = fitted_power_tail(q, step, &pts(terms), big_k as u64).ok_or_else(|| Error::NonDecay("singular tail fit".into()))?;
    let err = if terms > 1 {
        let lower = fitted_power_tail(q, step, &pts(terms - 1), big_k as u64).unwrap_or(full);
        (full - lower).norm()
    } else {
        full.norm()
    };
    Ok((full, err))
}

/// `sum_k int F(k, s) ds` under the given asymptotic model.
pub fn sum_integral_lattice_with<F>(f: &F, model: &LatticeModel, spec: &QuadSpec) -> Result<LatticeResult>
where
    F: Fn(i64, f64) -> Complex64 + Sync,
{
    spec.validate()?;
    if model.line_frequency == 0.0 && model.exponent.re >= -2.0 {
        return Err(Error::NonDecay(format!("joint exponent {} must have real part < -2", model.exponent)));
    }
    let big_k = spec.lattice_cutoff;
    let tol = spec.tolerance();
    let big_s = match model.k_tail {
        KTail::Fit { .. } => spec.line_cutoff.max(64.0 * big_k as f64),
        _ => spec.line_cutoff,
    };
    let q = model.exponent + 1.0;

    match model.k_tail {
        KTail::Geometric => geometric(f, model, spec, big_s, tol),
        KTail::Fit { .. } | KTail::Truncate => {
            let pos: Vec<i64> = (0..=big_k).collect();
            let hp = slices(f, &pos, model, big_s, tol)?;
            let hm = if model.even_k {
                None
            } else {
                let neg: Vec<i64> = (0..=big_k).map(|k| -k).collect();
                Some(slices(f, &neg, model, big_s, tol)?)
            };
            let mut acc = CompensatedSum::new();
            let mut budget = ErrorBudget::default();
            let weight = if model.even_k { 2.0 } else { 1.0 };
            if let Some(hm) = &hm {
                for (v, b) in hm.iter().skip(1).rev() {
                    acc.add(*v);
                    budget += *b;
                }
            }
            acc.add(hp[0].0);
            budget += hp[0].1;
            for (v, b) in hp.iter().skip(1) {
                acc.add(*v * weight);
                budget += b.scaled(weight);
            }
            let vp: Vec<Complex64> = hp.iter().map(|x| x.0).collect();
            let mut tail = Complex64::new(0.0, 0.0);
            let mut tail_err = 0.0;
            match model.k_tail {
                KTail::Fit { step, terms } => {
                    let (t, e) = side_tail(&vp, q, step, terms)?;
                    tail += t * weight;
                    tail_err += e * weight;
                    if let Some(hm) = &hm {
                        let vm: Vec<Complex64> = hm.iter().map(|x| x.0).collect();
                        let (t, e) = side_tail(&vm, q, step, terms)?;
                        tail += t;
                        tail_err += e;
                    }
                }
                _ => {
                    let bound = |h: &[Complex64]| {
                        let n = h.len() - 1;
                        let r = -q.re - 1.0;
                        if r > 0.0 {
                            h[n].norm() * n as f64 / r
                        } else {
                            f64::INFINITY
                        }
                    };
                    tail_err += weight * bound(&vp);
                    if let Some(hm) = &hm {
                        let vm: Vec<Complex64> = hm.iter().map(|x| x.0).collect();
                        tail_err += bound(&vm);
                    }
                }
            }
            acc.add(tail);
            budget.tail_error += tail_err;
            budget.rounding_estimate += acc.rounding_estimate();
            Ok(LatticeResult { value: acc.value(), budget, k_max: big_k, s_max: big_s })
        }
    }
}

fn geometric<F>(f: &F, model: &LatticeModel, spec: &QuadSpec, big_s: f64, tol: Tolerance) -> Result<LatticeResult>
where
    F: Fn(i64, f64) -> Complex64 + Sync,
{
    const BATCH: i64 = 16;
    let mut values: Vec<(i64, Complex64, ErrorBudget)> = Vec::new();
    let mut next = 0i64;
    let mut quiet = 0;
    let mut last_max = f64::INFINITY;
    let mut k_max = 0;
    while next <= spec.lattice_cutoff {
        let hi = (next + BATCH - 1).min(spec.lattice_cutoff);
        let mut ks: Vec<i64> = (next..=hi).collect();
        if !model.even_k {
            ks.extend((next.max(1)..=hi).map(|k| -k));
        }
        let got = slices(f, &ks, model, big_s, tol)?;
        let mut batch_max: f64 = 0.0;
        for (&k, (v, b)) in ks.iter().zip(got) {
            batch_max = batch_max.max(v.norm());
            values.push((k, v, b));
        }
        k_max = hi;
        next = hi + 1;
        let running: f64 = values.iter().map(|x| x.1.norm()).fold(0.0, f64::max);
        let negligible = batch_max <= (spec.abs_tol).max(1e-3 * spec.rel_tol * running);
        if negligible && batch_max <= last_max {
            quiet += 1;
            if quiet >= 2 {
                break;
            }
        } else {
            quiet = 0;
        }
        last_max = batch_max;
    }
    values.sort_by_key(|x| x.0);
    let weight = if model.even_k { 2.0 } else { 1.0 };
    let mut acc = CompensatedSum::new();
    let mut budget = ErrorBudget::default();
    for (k, v, b) in &values {
        let w = if *k == 0 { 1.0 } else { weight };
        acc.add(*v * w);
        budget += b.scaled(w);
    }
    // Last batch bounds the remainder (geometric decay, ratio at most 1/2 per batch).
    budget.tail_error += 2.0 * weight * last_max * BATCH as f64;
    budget.rounding_estimate += acc.rounding_estimate();
    Ok(LatticeResult { value: acc.value(), budget, k_max, s_max: big_s })
}

/// Spec-level entry point: joint algebraic decay `p = spec.decay_exponent`.
pub fn sum_integral_lattice<F>(f: &F, spec: &QuadSpec) -> Result<(Complex64, ErrorBudget)>
where
    F: Fn(i64, f64) -> Complex64 + Sync,
{
    let r = sum_integral_lattice_with(f, &LatticeModel::algebraic(spec.decay_exponent), spec)?;
    Ok((r.value, r.budget))
}

/// Asymptotic information about a bilateral series term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BilateralModel {
    /// `|t(k)| ~ |k|^p`.
    pub exponent: Complex64,
    pub tail: KTail,
}

/// `sum_{k in Z} t(k)` with symmetric truncation `|k| <= K` and fitted tails.
pub fn sum_bilateral_with<T>(term: &T, model: &BilateralModel, spec: &QuadSpec) -> Result<(Complex64, ErrorBudget)>
where
    T: Fn(i64) -> Complex64 + Sync,
{
    spec.validate()?;
    let big_k = spec.lattice_cutoff;
    let ks: Vec<i64> = (-big_k..=big_k).collect();
    let vals: Vec<Complex64> = ks.par_iter().map(|&k| term(k)).collect();
    let mut acc = CompensatedSum::new();
    for v in &vals {
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::NonDecay("non-finite series term".into()));
        }
        acc.add(*v);
    }
    let centre = big_k as usize;
    let pos: Vec<Complex64> = vals[centre..].to_vec();
    let neg: Vec<Complex64> = vals[..=centre].iter().rev().copied().collect();
    let mut tail = Complex64::new(0.0, 0.0);
    let mut tail_err = 0.0;
    for side in [&pos, &neg] {
        match model.tail {
            KTail::Fit { step, terms } => {
                let (t, e) = side_tail(side, model.exponent, step, terms)?;
                tail += t;
                tail_err += e;
            }
            _ => {
                let n = side.len() - 1;
                let r = -model.exponent.re - 1.0;
                tail_err += if r > 0.0 { side[n].norm() * n as f64 / r } else { f64::INFINITY };
            }
        }
    }
    acc.add(tail);
    Ok((acc.value(), ErrorBudget::new(0.0, tail_err, acc.rounding_estimate())))
}

/// Spec-level entry point: `|t(k)| ~ |k|^p`, `p = spec.decay_exponent`.
pub fn sum_bilateral<T>(term: &T, spec: &QuadSpec) -> Result<(Complex64, ErrorBudget)>
where
    T: Fn(i64) -> Complex64 + Sync,
{
    let model = BilateralModel { exponent: Complex64::new(spec.decay_exponent, 0.0), tail: KTail::Fit { step: 1, terms: 5 } };
    sum_bilateral_with(term, &model, spec)
}
