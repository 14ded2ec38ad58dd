//! Maps a [`RunConfig`] to library calls.
//!
//! All parameters are parsed before anything is computed, so a malformed
//! run fails fast with a parse error and a numeric failure always comes
//! with a report.

use crate::config::RunConfig;
use anyhow::{anyhow, bail, Result};
use cfield::field::{gamma_field, gamma_field_alt, FieldExponent, SpectralPoint};
use cfield::hyper::{f21_field, F21Method, F21Params};
use cfield::identities::{self, VerificationReport};
use cfield::index::KappaReading;
use cfield::mellin::MellinPoint;
use cfield::{sampling, Complex64, ErrorBudget, QuadSpec};
use std::collections::BTreeMap;
use std::time::Instant;

/// One computed check, or the library error that stopped it.
#[derive(Debug)]
pub struct Entry {
    pub command: String,
    pub params: BTreeMap<String, String>,
    pub result: std::result::Result<VerificationReport, String>,
    pub tol: f64,
}

impl Entry {
    pub fn passes(&self) -> bool {
        matches!(&self.result, Ok(r) if r.passes(self.tol))
    }
}

/// A parsed unit of work; running it cannot fail to parse.
struct Job {
    command: String,
    params: BTreeMap<String, String>,
    /// Tolerance of each report in order; the last one repeats.
    tols: Vec<f64>,
    run: Box<dyn FnOnce() -> cfield::Result<Vec<VerificationReport>>>,
}

/// Default tolerance and quadrature policy of each check.
fn defaults(command: &str) -> (f64, QuadSpec) {
    let base = QuadSpec::default();
    let fast = QuadSpec { rel_tol: 1e-10, lattice_cutoff: 256, ..base };
    match command {
        "verify-main" => (1e-6, fast),
        "verify-wilson" => (1e-8, fast),
        "verify-dougall" => (1e-8, QuadSpec { lattice_cutoff: 1024, ..fast }),
        "verify-gauss" => (1e-5, base.with_rel_tol(1e-8)),
        "mellin-power" => (1e-6, base.with_rel_tol(1e-9)),
        "mellin-f21" => (1e-4, base.with_rel_tol(1e-6)),
        "lemma-aux" => (1e-3, base.with_rel_tol(1e-4)),
        "verify-unitarity" => (1e-3, base.with_rel_tol(1e-8)),
        "verify-diffops" => (1e-12, base),
        "bridge" | "eval-gamma" => (1e-12, base),
        "eval-f21" => (1e-4, base.with_rel_tol(1e-6)),
        _ => (1e-6, base),
    }
}

fn tuple_param(a: &[Complex64]) -> String {
    a.iter().map(|&x| identities::fmt_complex(x)).collect::<Vec<_>>().join(",")
}

fn f21_params(cfg: &RunConfig) -> Result<F21Params> {
    let e = |name: &str, d: &str| -> Result<FieldExponent> { Ok(FieldExponent::new(cfg.complex(name)?, cfg.int_or(d, 0)?)) };
    Ok(F21Params::new(e("a", "da")?, e("b", "db")?, e("c", "dc")?))
}

fn reading(name: &str) -> Result<KappaReading> {
    KappaReading::ALL
        .iter()
        .copied()
        .find(|r| r.name() == name)
        .ok_or_else(|| anyhow!("--kappa: expected one of {}", KappaReading::ALL.map(|r| r.name()).join(", ")))
}

struct Planner<'a> {
    cfg: &'a RunConfig,
    jobs: Vec<Job>,
}

impl Planner<'_> {
    fn spec(&self, key: &str) -> Result<(f64, QuadSpec)> {
        let (tol, spec) = defaults(key);
        Ok((self.cfg.tol.unwrap_or(tol), self.cfg.quad.apply(spec)?))
    }

    fn push<F>(&mut self, command: &str, params: BTreeMap<String, String>, tols: Vec<f64>, run: F)
    where
        F: FnOnce() -> cfield::Result<Vec<VerificationReport>> + 'static,
    {
        self.jobs.push(Job { command: command.to_string(), params, tols, run: Box::new(run) });
    }

    fn one<F>(&mut self, command: &str, params: &[(&str, String)], tol: f64, run: F)
    where
        F: FnOnce() -> cfield::Result<VerificationReport> + 'static,
    {
        let p = params.iter().map(|(k, v)| (k.to_string(), v.clone())).collect();
        self.push(command, p, vec![tol], move || run().map(|r| vec![r]));
    }

    fn main(&mut self, a: [Complex64; 4]) -> Result<()> {
        let (tol, spec) = self.spec("verify-main")?;
        self.one("verify-main", &[("a", tuple_param(&a))], tol, move || identities::verify_main(&a, &spec));
        Ok(())
    }

    fn wilson(&mut self, a: [Complex64; 4]) -> Result<()> {
        let (tol, spec) = self.spec("verify-wilson")?;
        self.one("verify-wilson", &[("a", tuple_param(&a))], tol, move || identities::verify_wilson(&a, &spec));
        Ok(())
    }

    fn dougall(&mut self, b: [Complex64; 4], theta: f64) -> Result<()> {
        let (tol, spec) = self.spec("verify-dougall")?;
        let params = [("b", tuple_param(&b)), ("theta", theta.to_string())];
        self.one("verify-dougall", &params, tol, move || identities::verify_dougall(&b, theta, &spec));
        Ok(())
    }

    fn gauss(&mut self, p: F21Params) -> Result<()> {
        let (tol, spec) = self.spec("verify-gauss")?;
        let params = [("a", p.ea.to_string()), ("b", p.eb.to_string()), ("c", p.ec.to_string())];
        self.one("verify-gauss", &params, tol, move || identities::verify_gauss(&p, &spec));
        Ok(())
    }

    fn mellin(&mut self) -> Result<()> {
        let cfg = self.cfg;
        let kind = cfg.text_or("kind", "lemma");
        match kind {
            "power" => {
                let p = FieldExponent::new(cfg.complex("p")?, cfg.int_or("dp", 0)?);
                let q = FieldExponent::new(cfg.complex("q")?, cfg.int_or("dq", 0)?);
                let xi = MellinPoint::new(cfg.int_or("l", 0)?, cfg.complex("tau")?);
                let (tol, spec) = self.spec("mellin-power")?;
                let params = [
                    ("kind", kind.to_string()),
                    ("p", p.to_string()),
                    ("q", q.to_string()),
                    ("l", xi.l.to_string()),
                    ("tau", identities::fmt_complex(xi.tau)),
                ];
                self.one("verify-mellin", &params, tol, move || identities::verify_mellin_power(p, q, xi, &spec));
            }
            "f21" => {
                let p = f21_params(cfg)?;
                let xi = MellinPoint::new(cfg.int_or("l", 0)?, cfg.complex("tau")?);
                let (tol, spec) = self.spec("mellin-f21")?;
                let params = [
                    ("kind", kind.to_string()),
                    ("a", p.ea.to_string()),
                    ("b", p.eb.to_string()),
                    ("c", p.ec.to_string()),
                    ("l", xi.l.to_string()),
                    ("tau", identities::fmt_complex(xi.tau)),
                ];
                self.one("verify-mellin", &params, tol, move || identities::verify_mellin_f21(&p, xi, &spec));
            }
            "lemma" => {
                let (a, b, mu) = (cfg.real("a")?, cfg.real("b")?, cfg.real("mu")?);
                let pt = SpectralPoint::new(cfg.int_or("k", 0)?, cfg.real_or("s", 0.5)?);
                let (tol, spec) = self.spec("lemma-aux")?;
                let params = [
                    ("kind", kind.to_string()),
                    ("a", a.to_string()),
                    ("b", b.to_string()),
                    ("mu", mu.to_string()),
                    ("k", pt.k.to_string()),
                    ("s", pt.s.to_string()),
                ];
                self.one("verify-mellin", &params, tol, move || identities::verify_lemma_aux(a, b, mu, pt, &spec));
            }
            other => bail!("--kind: expected power, f21 or lemma, got {other:?}"),
        }
        Ok(())
    }

    fn unitarity(&mut self) -> Result<()> {
        let cfg = self.cfg;
        let (a, b) = (cfg.real("a")?, cfg.real("b")?);
        let (mus, nus) = (cfg.reals("mu")?, cfg.reals("nu")?);
        let r = reading(cfg.text_or("kappa", KappaReading::Adopted.name()))?;
        let (tol, spec) = self.spec("verify-unitarity")?;
        for &mu in &mus {
            for &nu in &nus {
                let params =
                    [("a", a.to_string()), ("b", b.to_string()), ("mu", mu.to_string()), ("nu", nu.to_string()), ("kappa", r.name().to_string())];
                self.one("verify-unitarity", &params, tol, move || identities::verify_unitarity(a, b, mu, nu, r, &spec));
            }
        }
        Ok(())
    }

    fn diffops(&mut self) -> Result<()> {
        let cfg = self.cfg;
        let a = cfg.tuple4("a")?;
        let centre = (cfg.complex("lambda")?, cfg.complex("lambda-prime")?);
        let (tol, _) = self.spec("verify-diffops")?;
        let params = [("a", tuple_param(&a)), ("lambda", identities::fmt_complex(centre.0)), ("lambda-prime", identities::fmt_complex(centre.1))];
        // Constants must vanish to rounding; the stricter bound applies
        // unless a tolerance is given explicitly.
        let const_tol = cfg.tol.unwrap_or(1e-14);
        let p = params.iter().map(|(k, v)| (k.to_string(), v.clone())).collect();
        self.push("verify-diffops", p, vec![tol, const_tol], move || identities::verify_diffops(&a, centre));
        Ok(())
    }

    fn bridge(&mut self) -> Result<()> {
        let (theta, k) = (self.cfg.real("theta")?, self.cfg.int_or("k", 0)?);
        let (tol, _) = self.spec("bridge")?;
        self.one("bridge", &[("theta", theta.to_string()), ("k", k.to_string())], tol, move || identities::bridge_check(theta, k));
        Ok(())
    }

    fn eval_gamma(&mut self) -> Result<()> {
        let e = FieldExponent::new(self.cfg.complex("a")?, self.cfg.int_or("delta", 0)?);
        let (tol, _) = self.spec("eval-gamma")?;
        self.one("eval-gamma", &[("a", e.to_string())], tol, move || {
            let start = Instant::now();
            let lhs = gamma_field(e).value()?;
            let rhs = gamma_field_alt(e).value()?;
            let mut r = VerificationReport::new("eval-gamma", lhs, rhs, ErrorBudget::new(0.0, 0.0, 64.0 * f64::EPSILON * lhs.norm())).param("a", e);
            r.notes.push("lhs: i^delta G(a)/G(1-a'); rhs: i^-delta G(a')/G(1-a)".into());
            r.wall_ms = start.elapsed().as_secs_f64() * 1e3;
            Ok(r)
        });
        Ok(())
    }

    fn eval_f21(&mut self) -> Result<()> {
        let p = f21_params(self.cfg)?;
        let z = self.cfg.complex("z")?;
        let method = match self.cfg.text_or("method", "mb") {
            "direct" => F21Method::Direct,
            "mb" => F21Method::MellinBarnes,
            "series" => F21Method::Series,
            other => bail!("--method: expected direct, mb or series, got {other:?}"),
        };
        let (tol, spec) = self.spec("eval-f21")?;
        let name = self.cfg.text_or("method", "mb").to_string();
        let params = [("a", p.ea.to_string()), ("b", p.eb.to_string()), ("c", p.ec.to_string()), ("z", identities::fmt_complex(z)), ("method", name)];
        self.one("eval-f21", &params, tol, move || {
            let start = Instant::now();
            let (lhs, budget) = f21_field(&p, z, method, &spec)?;
            // The reference is the series route, or Mellin–Barnes when the
            // series itself is being evaluated.
            let reference = if method == F21Method::Series { F21Method::MellinBarnes } else { F21Method::Series };
            let (rhs, b2) = f21_field(&p, z, reference, &spec)?;
            let mut r = VerificationReport::new("eval-f21", lhs, rhs, budget + b2);
            r.notes.push(format!("rhs by the {} route", if reference == F21Method::Series { "series" } else { "Mellin-Barnes" }));
            r.wall_ms = start.elapsed().as_secs_f64() * 1e3;
            Ok(r)
        });
        Ok(())
    }

    fn sweep(&mut self) -> Result<()> {
        let cfg = self.cfg;
        let target = cfg.params.get("command").ok_or_else(|| anyhow!("sweep: missing --command"))?.clone();
        let draws = cfg.draws.unwrap_or(20);
        let mut rng = sampling::rng(cfg.seed.unwrap_or(0));
        for _ in 0..draws {
            match target.as_str() {
                "verify-main" => self.main(sampling::main_tuple(&mut rng))?,
                "verify-wilson" => self.wilson(sampling::wilson_tuple(&mut rng))?,
                "verify-dougall" => {
                    let (b, theta) = sampling::dougall_draw(&mut rng);
                    self.dougall(b, theta)?
                }
                "verify-gauss" => self.gauss(sampling::gauss_params(&mut rng))?,
                other => bail!("sweep: --command must be verify-main, verify-wilson, verify-dougall or verify-gauss, got {other:?}"),
            }
        }
        Ok(())
    }
}

/// Parses the whole configuration into jobs; errors here are parse errors.
fn plan(cfg: &RunConfig) -> Result<Vec<Job>> {
    let mut p = Planner { cfg, jobs: Vec::new() };
    match cfg.command.as_str() {
        "verify-main" => p.main(cfg.tuple4("a")?)?,
        "verify-wilson" => p.wilson(cfg.tuple4("a")?)?,
        "verify-dougall" => p.dougall(cfg.tuple4("b")?, cfg.real("theta")?)?,
        "verify-gauss" => p.gauss(f21_params(cfg)?)?,
        "verify-mellin" => p.mellin()?,
        "verify-unitarity" => p.unitarity()?,
        "verify-diffops" => p.diffops()?,
        "bridge" => p.bridge()?,
        "eval-gamma" => p.eval_gamma()?,
        "eval-f21" => p.eval_f21()?,
        "sweep" => p.sweep()?,
        "" => bail!("no command given"),
        other => bail!("unknown command {other:?}"),
    }
    Ok(p.jobs)
}

/// Parses, then runs every job in order.
pub fn run(cfg: &RunConfig) -> Result<Vec<Entry>> {
    let jobs = plan(cfg)?;
    let mut out = Vec::new();
    for job in jobs {
        let tol = |i: usize| job.tols[i.min(job.tols.len() - 1)];
        match (job.run)() {
            Ok(reports) => out.extend(reports.into_iter().enumerate().map(|(i, r)| Entry {
                command: job.command.clone(),
                params: job.params.clone(),
                result: Ok(r),
                tol: tol(i),
            })),
            Err(e) => out.push(Entry { command: job.command.clone(), params: job.params.clone(), result: Err(e.to_string()), tol: tol(0) }),
        }
    }
    Ok(out)
}

/// Rows `k, s, value` of the main integrand on `|k| <= k_max`,
/// `s = -s_max, -s_max + step, ..., s_max`.
pub fn main_profile(a: &[Complex64; 4], k_max: i64, s_max: f64, step: f64) -> Result<Vec<(i64, f64, Complex64)>> {
    if !(step > 0.0) || !(s_max >= 0.0) || k_max < 0 {
        bail!("profile grid needs k-max >= 0, s-max >= 0 and step > 0");
    }
    let n = (s_max / step).round() as i64;
    let mut rows = Vec::new();
    for k in -k_max..=k_max {
        for j in -n..=n {
            let s = j as f64 * step;
            rows.push((k, s, identities::main_integrand(a, k, s)));
        }
    }
    Ok(rows)
}
