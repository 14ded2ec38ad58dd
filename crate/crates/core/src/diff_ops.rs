//! Difference operators: the Wilson operator `L` in one variable and the
//! pair `L_lambda`, `L_lambda'` acting on functions of `lambda|lambda'`.
//!
//! ```text
//! L f(s) = P(is) / (2is(1+2is)) (f(s-i) - f(s)) + P(-is) / (-2is(1-2is)) (f(s+i) - f(s)),
//! L_lambda Phi = P(l) / (2l(1+2l)) (Phi(l+1|l') - Phi) + P(-l) / (-2l(1-2l)) (Phi(l-1|l') - Phi),
//! ```
//!
//! with `P(x) = prod (a_j + x)`. `L_lambda'` is the same in the second
//! variable with the shifts reversed: `l' - 1` goes with `P(l')`.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// Offsets closer than this to a singular point are treated as singular.
const SINGULAR_TOL: f64 = 1e-12;
/// Step of the symmetric limit at a removable singularity.
const LIMIT_STEP: f64 = 1e-3;

/// What to do where a coefficient has a vanishing denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SingularPolicy {
    /// Richardson-extrapolated symmetric limit.
    #[default]
    Limit,
    Error,
}

fn poly(a: &[Complex64; 4], x: Complex64) -> Complex64 {
    a.iter().map(|&aj| aj + x).product()
}

/// `P(x) / (2x(1+2x)) (g(x+1) - g(x)) + P(-x) / (-2x(1-2x)) (g(x-1) - g(x))`,
/// the common form of all three operators.
fn step_operator<G>(a: &[Complex64; 4], x: Complex64, g: &G) -> Result<Complex64>
where
    G: Fn(Complex64) -> Result<Complex64>,
{
    let g0 = g(x)?;
    let up = poly(a, x) / (2.0 * x * (1.0 + 2.0 * x));
    let down = poly(a, -x) / (-2.0 * x * (1.0 - 2.0 * x));
    Ok(up * (g(x + 1.0)? - g0) + down * (g(x - 1.0)? - g0))
}

fn is_singular(x: Complex64) -> bool {
    [0.0, 0.5, -0.5].iter().any(|&p| (x - p).norm() < SINGULAR_TOL)
}

/// Evaluates `op` at `x`, taking the symmetric limit at `x in {0, 1/2, -1/2}`.
fn with_policy<O>(x: Complex64, policy: SingularPolicy, op: &O) -> Result<Complex64>
where
    O: Fn(Complex64) -> Result<Complex64>,
{
    if !is_singular(x) {
        return op(x);
    }
    match policy {
        SingularPolicy::Error => Err(Error::Pole(format!("difference operator coefficient at {x}"))),
        SingularPolicy::Limit => {
            let avg = |h: f64| -> Result<Complex64> { Ok(0.5 * (op(x + h)? + op(x - h)?)) };
            let (a1, a2) = (avg(LIMIT_STEP)?, avg(0.5 * LIMIT_STEP)?);
            Ok((4.0 * a2 - a1) / 3.0)
        }
    }
}

/// The Wilson operator at complex `s`; `f` must be defined at `s` and `s +- i`.
pub fn apply_wilson_l<F>(a: &[Complex64; 4], f: &F, s: Complex64, policy: SingularPolicy) -> Result<Complex64>
where
    F: Fn(Complex64) -> Complex64,
{
    let i = Complex64::i();
    // x = is turns x + 1 into s - i.
    let op = |x: Complex64| step_operator(a, x, &|y: Complex64| Ok(f(-i * y)));
    with_policy(i * s, policy, &op)
}

/// A function of `lambda|lambda'` known on the window
/// `lambda0 + m, lambda0' + n` with `|m|, |n| <= radius`.
pub struct LatticeFunction<'a> {
    pub centre: (Complex64, Complex64),
    pub radius: i64,
    f: Box<dyn Fn(Complex64, Complex64) -> Result<Complex64> + Sync + 'a>,
}

impl<'a> LatticeFunction<'a> {
    pub fn new<F>(centre: (Complex64, Complex64), radius: i64, f: F) -> Self
    where
        F: Fn(Complex64, Complex64) -> Complex64 + Sync + 'a,
    {
        Self { centre, radius, f: Box::new(move |l, lp| Ok(f(l, lp))) }
    }

    fn offset(&self, x: Complex64, x0: Complex64) -> Result<()> {
        let d = x - x0;
        let m = d.re.round();
        // Near-integer offsets are admitted so that limits can probe
        // the neighbourhood of a window point.
        if (d - m).norm() > 0.01 || m.abs() > self.radius as f64 {
            return Err(Error::Domain(format!("{x} is outside the window around {x0} of radius {}", self.radius)));
        }
        Ok(())
    }

    pub fn eval(&self, l: Complex64, lp: Complex64) -> Result<Complex64> {
        self.offset(l, self.centre.0)?;
        self.offset(lp, self.centre.1)?;
        (self.f)(l, lp)
    }
}

/// Shift axis of the commuting operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Lambda,
    LambdaPrime,
}

/// `L_lambda Phi` or `L_lambda' Phi` at `(l, lp)`.
pub fn apply_frak_l(axis: Axis, a: &[Complex64; 4], phi: &LatticeFunction, l: Complex64, lp: Complex64, policy: SingularPolicy) -> Result<Complex64> {
    match axis {
        Axis::Lambda => {
            let op = |x: Complex64| step_operator(a, x, &|y: Complex64| phi.eval(y, lp));
            with_policy(l, policy, &op)
        }
        Axis::LambdaPrime => {
            // Reflecting about x sends x + 1 to l' - 1, as displayed.
            let op = |x: Complex64| step_operator(a, x, &|y: Complex64| phi.eval(l, 2.0 * x - y));
            with_policy(lp, policy, &op)
        }
    }
}

/// The image of `phi` under one operator, on the window shrunk by one.
pub fn frak_l_image<'a>(axis: Axis, a: [Complex64; 4], phi: &'a LatticeFunction<'a>, policy: SingularPolicy) -> LatticeFunction<'a> {
    LatticeFunction { centre: phi.centre, radius: phi.radius - 1, f: Box::new(move |l, lp| apply_frak_l(axis, &a, phi, l, lp, policy)) }
}
