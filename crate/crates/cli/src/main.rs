//! `cfield`: runs the identity checks and writes JSON reports.
//!
//! Exit status is 0 when every check passes, 1 when a check fails or a
//! computation errors (the report is still written), 2 on bad input.

mod config;
mod output;
mod run;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand};
use config::{QuadOverrides, RunConfig};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

/// Environment variable that sets the number of worker threads.
const WORKERS_VAR: &str = "CFIELD_WORKERS";

#[derive(Parser)]
#[command(name = "cfield", version, about = "Numerical checks of complex-field beta integrals and hypergeometric identities")]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,
    #[command(flatten)]
    global: Global,
}

#[derive(Args)]
struct Global {
    /// Pass threshold on the relative error (default depends on the command).
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Seed for randomized sweeps.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Number of draws in a sweep.
    #[arg(long, global = true)]
    draws: Option<usize>,
    /// JSON file with the same fields as the flags; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write the JSON report here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Also write a CSV of hash, rel_err, wall_ms, K, S per report.
    #[arg(long, global = true)]
    plotdata: Option<PathBuf>,
    /// Quadrature relative tolerance.
    #[arg(long, global = true)]
    rel_tol: Option<f64>,
    /// Quadrature absolute tolerance.
    #[arg(long, global = true)]
    abs_tol: Option<f64>,
    /// Subdivision budget of adaptive quadrature.
    #[arg(long, global = true)]
    max_subdivisions: Option<usize>,
    /// Cutoff of line integrals.
    #[arg(long, global = true)]
    line_cutoff: Option<f64>,
    /// Largest lattice index summed explicitly.
    #[arg(long, global = true)]
    lattice_cutoff: Option<i64>,
}

#[derive(Subcommand)]
enum Command {
    /// The four-parameter beta integral over the spectral lattice.
    VerifyMain(MainArgs),
    /// The Wilson integral.
    VerifyWilson(TupleArgs),
    /// The Dougall sum.
    VerifyDougall(DougallArgs),
    /// The Gauss value of 2F1 at z = 1.
    VerifyGauss(F21Args),
    /// Mellin transforms: power pair, 2F1 pair or the auxiliary lemma.
    VerifyMellin(MellinArgs),
    /// The index transform against the rho-inner product.
    VerifyUnitarity(UnitarityArgs),
    /// Commutation and constant annihilation of the difference operators.
    VerifyDiffops(DiffopsArgs),
    /// Reflection-based value of the bridge sum.
    Bridge(BridgeArgs),
    /// Random draws of one of verify-main, -wilson, -dougall, -gauss.
    Sweep(SweepArgs),
    /// Gamma of the complex field by both expressions.
    EvalGamma(GammaArgs),
    /// 2F1 of the complex field by a chosen route against a reference.
    EvalF21(EvalF21Args),
}

/// Collects the named options that are set into a parameter map.
macro_rules! params {
    ($s:expr; $($f:ident),*) => {{
        let mut m = BTreeMap::new();
        $(if let Some(v) = &$s.$f { m.insert(stringify!($f).replace('_', "-"), v.to_string()); })*
        m
    }};
}

#[derive(Args)]
struct TupleArgs {
    /// Four comma-separated complex values.
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
}

#[derive(Args)]
struct MainArgs {
    /// Four comma-separated complex values.
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    /// Write the integrand on a (k, s) grid to this CSV.
    #[arg(long)]
    profile: Option<PathBuf>,
    /// Largest |k| of the profile grid.
    #[arg(long, default_value_t = 10)]
    profile_k: i64,
    /// Largest |s| of the profile grid.
    #[arg(long, default_value_t = 10.0)]
    profile_s: f64,
    /// Step in s of the profile grid.
    #[arg(long, default_value_t = 0.5)]
    profile_step: f64,
}

#[derive(Args)]
struct DougallArgs {
    #[arg(long, allow_hyphen_values = true)]
    b: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<String>,
}

#[derive(Args)]
struct F21Args {
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    c: Option<String>,
    /// Index differences of a, b, c (default 0).
    #[arg(long, allow_hyphen_values = true)]
    da: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    db: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    dc: Option<String>,
}

#[derive(Args)]
struct MellinArgs {
    /// power, f21 or lemma.
    #[arg(long)]
    kind: Option<String>,
    #[command(flatten)]
    f21: F21Args,
    #[arg(long, allow_hyphen_values = true)]
    p: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    dp: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    q: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    dq: Option<String>,
    /// Mellin index l.
    #[arg(long, allow_hyphen_values = true)]
    l: Option<String>,
    /// Mellin variable tau.
    #[arg(long, allow_hyphen_values = true)]
    tau: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    mu: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    k: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    s: Option<String>,
}

#[derive(Args)]
struct UnitarityArgs {
    #[arg(long)]
    a: Option<String>,
    #[arg(long)]
    b: Option<String>,
    /// Comma-separated list; every (mu, nu) pair is checked.
    #[arg(long)]
    mu: Option<String>,
    #[arg(long)]
    nu: Option<String>,
    /// Weight convention: adopted, printed or without-lambda.
    #[arg(long)]
    kappa: Option<String>,
}

#[derive(Args)]
struct DiffopsArgs {
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    lambda_prime: Option<String>,
}

#[derive(Args)]
struct BridgeArgs {
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    k: Option<String>,
}

#[derive(Args)]
struct SweepArgs {
    /// The command to draw parameters for.
    #[arg(long)]
    command: Option<String>,
}

#[derive(Args)]
struct GammaArgs {
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    delta: Option<String>,
}

#[derive(Args)]
struct EvalF21Args {
    #[command(flatten)]
    f21: F21Args,
    #[arg(long, allow_hyphen_values = true)]
    z: Option<String>,
    /// direct, mb or series.
    #[arg(long)]
    method: Option<String>,
}

/// A profile request of `verify-main`.
struct Profile {
    path: PathBuf,
    k: i64,
    s: f64,
    step: f64,
}

fn f21_params(f: &F21Args) -> BTreeMap<String, String> {
    params!(f; a, b, c, da, db, dc)
}

fn flags(cli: Cli) -> (RunConfig, Option<PathBuf>, Option<Profile>) {
    let g = cli.global;
    let mut profile = None;
    let (command, params) = match cli.command {
        None => ("", BTreeMap::new()),
        Some(c) => match c {
            Command::VerifyMain(x) => {
                profile = x.profile.map(|path| Profile { path, k: x.profile_k, s: x.profile_s, step: x.profile_step });
                ("verify-main", params!(x; a))
            }
            Command::VerifyWilson(x) => ("verify-wilson", params!(x; a)),
            Command::VerifyDougall(x) => ("verify-dougall", params!(x; b, theta)),
            Command::VerifyGauss(x) => ("verify-gauss", f21_params(&x)),
            Command::VerifyMellin(x) => {
                let mut m = f21_params(&x.f21);
                m.extend(params!(x; kind, p, dp, q, dq, l, tau, mu, k, s));
                ("verify-mellin", m)
            }
            Command::VerifyUnitarity(x) => ("verify-unitarity", params!(x; a, b, mu, nu, kappa)),
            Command::VerifyDiffops(x) => ("verify-diffops", params!(x; a, lambda, lambda_prime)),
            Command::Bridge(x) => ("bridge", params!(x; theta, k)),
            Command::Sweep(x) => ("sweep", params!(x; command)),
            Command::EvalGamma(x) => ("eval-gamma", params!(x; a, delta)),
            Command::EvalF21(x) => {
                let mut m = f21_params(&x.f21);
                m.extend(params!(x; z, method));
                ("eval-f21", m)
            }
        },
    };
    let cfg = RunConfig {
        command: command.to_string(),
        params,
        tol: g.tol,
        seed: g.seed,
        draws: g.draws,
        quad: QuadOverrides {
            rel_tol: g.rel_tol,
            abs_tol: g.abs_tol,
            max_subdivisions: g.max_subdivisions,
            line_cutoff: g.line_cutoff,
            lattice_cutoff: g.lattice_cutoff,
        },
        output: g.output,
        plotdata: g.plotdata,
    };
    (cfg, g.config, profile)
}

fn set_workers() -> Result<()> {
    let Ok(v) = std::env::var(WORKERS_VAR) else { return Ok(()) };
    let n: usize = v.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| anyhow!("{WORKERS_VAR}: expected a positive integer, got {v:?}"))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| anyhow!("{WORKERS_VAR}: {e}"))
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

/// Everything that can go wrong before a number is computed.
fn prepare() -> Result<(RunConfig, Option<Profile>)> {
    let (cfg, config_path, profile) = flags(Cli::parse());
    let cfg = match config_path {
        Some(p) => cfg.over(RunConfig::from_file(&p)?),
        None => cfg,
    };
    set_workers()?;
    Ok((cfg, profile))
}

fn main() -> ExitCode {
    let (cfg, profile) = match prepare() {
        Ok(x) => x,
        Err(e) => {
            eprintln!("cfield: {e:#}");
            return ExitCode::from(2);
        }
    };
    if let Some(p) = profile {
        let rows = cfg.tuple4("a").and_then(|a| run::main_profile(&a, p.k, p.s, p.step));
        if let Err(e) = rows.and_then(|rows| write(&p.path, &output::profile(&rows))) {
            eprintln!("cfield: {e:#}");
            return ExitCode::from(2);
        }
    }
    let entries = match run::run(&cfg) {
        Ok(x) => x,
        Err(e) => {
            eprintln!("cfield: {e:#}");
            return ExitCode::from(2);
        }
    };
    let json = output::json(&entries);
    let written = match &cfg.output {
        Some(p) => write(p, &json),
        None => {
            print!("{json}");
            Ok(())
        }
    };
    let written = written.and_then(|_| match &cfg.plotdata {
        Some(p) => write(p, &output::plotdata(&entries)),
        None => Ok(()),
    });
    if let Err(e) = written {
        eprintln!("cfield: {e:#}");
        return ExitCode::from(2);
    }
    let failed: Vec<_> = entries.iter().filter(|e| !e.passes()).collect();
    for e in &failed {
        match &e.result {
            Ok(r) => eprintln!("cfield: {} failed: rel_err {:e} > tol {:e}", e.command, r.rel_err, e.tol),
            Err(msg) => eprintln!("cfield: {} error: {msg}", e.command),
        }
    }
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
