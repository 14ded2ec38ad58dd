//! Run configuration: what the flags and a `--config` file both describe.

use anyhow::{anyhow, bail, Context, Result};
use cfield::{Complex64, QuadSpec};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

/// Overrides of the quadrature policy; unset fields keep the command's default.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadOverrides {
    pub rel_tol: Option<f64>,
    pub abs_tol: Option<f64>,
    pub max_subdivisions: Option<usize>,
    pub line_cutoff: Option<f64>,
    pub lattice_cutoff: Option<i64>,
}

impl QuadOverrides {
    pub fn apply(&self, mut spec: QuadSpec) -> Result<QuadSpec> {
        if let Some(v) = self.rel_tol {
            spec.rel_tol = v;
        }
        if let Some(v) = self.abs_tol {
            spec.abs_tol = v;
        }
        if let Some(v) = self.max_subdivisions {
            spec.max_subdivisions = v;
        }
        if let Some(v) = self.line_cutoff {
            spec.line_cutoff = v;
        }
        if let Some(v) = self.lattice_cutoff {
            spec.lattice_cutoff = v;
        }
        spec.validate().map_err(|e| anyhow!("quadrature settings: {e}"))?;
        Ok(spec)
    }
}

/// A complete run. Parameter values are kept as strings until the command
/// that consumes them parses them.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub command: String,
    pub params: BTreeMap<String, String>,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
    pub draws: Option<usize>,
    pub quad: QuadOverrides,
    pub output: Option<PathBuf>,
    pub plotdata: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_file(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    /// Fills every field unset here from `base`; parameters are merged with
    /// this config taking precedence.
    pub fn over(mut self, base: RunConfig) -> Self {
        if self.command.is_empty() {
            self.command = base.command;
        }
        for (k, v) in base.params {
            self.params.entry(k).or_insert(v);
        }
        self.tol = self.tol.or(base.tol);
        self.seed = self.seed.or(base.seed);
        self.draws = self.draws.or(base.draws);
        let (q, b) = (&mut self.quad, base.quad);
        q.rel_tol = q.rel_tol.or(b.rel_tol);
        q.abs_tol = q.abs_tol.or(b.abs_tol);
        q.max_subdivisions = q.max_subdivisions.or(b.max_subdivisions);
        q.line_cutoff = q.line_cutoff.or(b.line_cutoff);
        q.lattice_cutoff = q.lattice_cutoff.or(b.lattice_cutoff);
        self.output = self.output.or(base.output);
        self.plotdata = self.plotdata.or(base.plotdata);
        self
    }

    fn raw(&self, name: &str) -> Result<&str> {
        self.params.get(name).map(String::as_str).ok_or_else(|| anyhow!("{}: missing parameter --{name}", self.command))
    }

    pub fn has(&self, name: &str) -> bool {
        self.params.contains_key(name)
    }

    pub fn complex(&self, name: &str) -> Result<Complex64> {
        parse_complex(self.raw(name)?).with_context(|| format!("--{name}"))
    }

    pub fn real(&self, name: &str) -> Result<f64> {
        let s = self.raw(name)?;
        s.trim().parse().map_err(|_| anyhow!("--{name}: expected a real number, got {s:?}"))
    }

    pub fn real_or(&self, name: &str, default: f64) -> Result<f64> {
        if self.has(name) {
            self.real(name)
        } else {
            Ok(default)
        }
    }

    pub fn int_or(&self, name: &str, default: i64) -> Result<i64> {
        match self.params.get(name) {
            None => Ok(default),
            Some(s) => s.trim().parse().map_err(|_| anyhow!("--{name}: expected an integer, got {s:?}")),
        }
    }

    pub fn text_or<'a>(&'a self, name: &str, default: &'a str) -> &'a str {
        self.params.get(name).map(String::as_str).unwrap_or(default)
    }

    pub fn reals(&self, name: &str) -> Result<Vec<f64>> {
        let s = self.raw(name)?;
        s.split(',').map(|x| x.trim().parse().map_err(|_| anyhow!("--{name}: expected real numbers, got {s:?}"))).collect()
    }

    pub fn tuple4(&self, name: &str) -> Result<[Complex64; 4]> {
        let s = self.raw(name)?;
        let v: Vec<Complex64> = s.split(',').map(parse_complex).collect::<Result<_>>().with_context(|| format!("--{name}"))?;
        v.try_into().map_err(|v: Vec<_>| anyhow!("--{name}: expected 4 values, got {}", v.len()))
    }
}

/// Parses `re`, `re+im i`, `re-im i` or `im i`; spaces are ignored.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        bail!("empty complex number");
    }
    if t.contains(['j', 'J']) {
        bail!("complex numbers are written re+im i, got {s:?}");
    }
    let v = Complex64::from_str(&t).map_err(|_| anyhow!("not a complex number: {s:?}"))?;
    if !(v.re.is_finite() && v.im.is_finite()) {
        bail!("complex number must be finite, got {s:?}");
    }
    Ok(v)
}
