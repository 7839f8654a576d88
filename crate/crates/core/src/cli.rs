//! Command-line front end: one binary, six subcommands (scan, fit, witness,
//! abscissa, simulate, check). Flags override `key = value` pairs from an
//! optional config file; every run writes its CSV artifact plus a flat
//! `key=value` summary file.
//!
//! Exit codes: 0 success, 1 failed checks, 2 usage, 3 flagged truncation
//! (rows are still written), 4 I/O failure.

use crate::checks;
use crate::csvio;
use crate::error::{Error, Result};
use crate::modal::{DomainSpec, ModalState, Params};
use crate::regularity::{
    fit_decay_exponent, gevrey_certificate, spectral_abscissa, witness_growth_exponent,
    witness_sequence,
};
use crate::resolvent::{log_grid, scan_resolvent, TruncationPolicy};
use crate::simulator::{decay_rate_estimate, simulate, uniform_times, InitialData};
use clap::{Args, Parser, Subcommand};
use num_complex::Complex64 as C64;
use std::collections::HashMap;
use std::path::PathBuf;
use std::str::FromStr;

#[derive(Parser, Debug)]
#[command(
    name = "thermoplate",
    version,
    about = "Spectral toolkit for thermoelastic plates with fractional rotational inertia"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Resolvent-norm scan over a log-spaced lambda grid (writes scan.csv)
    Scan(ScanArgs),
    /// Scan plus a decay-exponent fit against the theoretical band
    Fit(FitArgs),
    /// Non-analyticity witness sequence (writes witness.csv)
    Witness(WitnessArgs),
    /// Per-mode spectral abscissa (writes abscissa.csv)
    Abscissa(AbscissaArgs),
    /// Exact modal time evolution (writes trace.csv)
    Simulate(SimulateArgs),
    /// Run the full verification suite and print a verdict table
    Check(CheckArgs),
}

#[derive(Args, Debug, Default, Clone)]
struct CommonArgs {
    /// Flat `key = value` config file; command-line flags override it
    #[arg(long)]
    config: Option<PathBuf>,
    /// Rotational inertia coefficient (> 0)
    #[arg(long)]
    gamma: Option<f64>,
    /// Fractional power in [0, 1]
    #[arg(long)]
    tau: Option<f64>,
    /// Thermal coupling (> 0)
    #[arg(long)]
    alpha: Option<f64>,
    /// Velocity coupling (> 0)
    #[arg(long)]
    beta: Option<f64>,
    /// Heat conduction (> 0)
    #[arg(long)]
    kappa: Option<f64>,
    /// Eigenvalue sequence: interval, square, or explicit
    #[arg(long)]
    domain: Option<String>,
    /// Comma-separated eigenvalues for --domain explicit
    #[arg(long)]
    sigmas: Option<String>,
    /// Number of modes for listing commands
    #[arg(long)]
    count: Option<usize>,
    /// Output CSV path
    #[arg(long)]
    out: Option<PathBuf>,
    /// Summary file path (key=value lines)
    #[arg(long)]
    summary: Option<PathBuf>,
    /// Seed for randomized checks
    #[arg(long)]
    seed: Option<u64>,
    /// Cap worker parallelism
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args, Debug, Default, Clone)]
struct GridArgs {
    #[arg(long)]
    lambda_min: Option<f64>,
    #[arg(long)]
    lambda_max: Option<f64>,
    #[arg(long)]
    points: Option<usize>,
    /// Truncation safety multiplier on the resonance scale
    #[arg(long)]
    safety: Option<f64>,
    /// Trailing sigma-decades for the tail certificate
    #[arg(long)]
    tail_decades: Option<u32>,
}

#[derive(Args, Debug)]
struct ScanArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[command(flatten)]
    grid: GridArgs,
}

#[derive(Args, Debug)]
struct FitArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[command(flatten)]
    grid: GridArgs,
    /// Fit window lower end (defaults to lambda-min)
    #[arg(long)]
    window_min: Option<f64>,
    /// Fit window upper end (defaults to lambda-max)
    #[arg(long)]
    window_max: Option<f64>,
}

#[derive(Args, Debug)]
struct WitnessArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long)]
    n_min: Option<usize>,
    #[arg(long)]
    n_max: Option<usize>,
}

#[derive(Args, Debug)]
struct AbscissaArgs {
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Modal initial datum "sigma:u_re,u_im,v_re,v_im,th_re,th_im"; repeatable
    #[arg(long = "mode", action = clap::ArgAction::Append)]
    modes: Vec<String>,
    #[arg(long)]
    t_max: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
    /// Optional decay-rate fit window start
    #[arg(long)]
    fit_from: Option<f64>,
    /// Optional decay-rate fit window end
    #[arg(long)]
    fit_to: Option<f64>,
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[command(flatten)]
    common: CommonArgs,
}

/// Fully resolved run plan: flags merged over config over defaults.
#[derive(Debug, Clone)]
pub struct RunPlan {
    pub command: PlanCommand,
    pub params: Params,
    pub domain: DomainSpec,
    pub out: PathBuf,
    pub summary: PathBuf,
    pub seed: u64,
    pub threads: Option<usize>,
}

#[derive(Debug, Clone)]
pub enum PlanCommand {
    Scan {
        grid: Vec<f64>,
        policy: TruncationPolicy,
    },
    Fit {
        grid: Vec<f64>,
        policy: TruncationPolicy,
        window: (f64, f64),
    },
    Witness {
        n_range: (usize, usize),
    },
    Abscissa {
        count: usize,
    },
    Simulate {
        data: InitialData,
        times: Vec<f64>,
        fit_window: Option<(f64, f64)>,
    },
    Check,
}

const KNOWN_KEYS: &[&str] = &[
    "gamma",
    "tau",
    "alpha",
    "beta",
    "kappa",
    "domain",
    "sigmas",
    "count",
    "out",
    "summary",
    "seed",
    "threads",
    "lambda-min",
    "lambda-max",
    "points",
    "safety",
    "tail-decades",
    "window-min",
    "window-max",
    "n-min",
    "n-max",
    "t-max",
    "steps",
    "fit-from",
    "fit-to",
    "mode",
];

struct ConfigMap(HashMap<String, String>);

impl ConfigMap {
    fn empty() -> Self {
        ConfigMap(HashMap::new())
    }

    fn load(path: &PathBuf) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut map = HashMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Usage(format!(
                    "{}:{}: expected `key = value`, got `{raw}`",
                    path.display(),
                    lineno + 1
                ))
            })?;
            let key = key.trim().to_string();
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(Error::Usage(format!(
                    "{}:{}: unknown config key `{key}`",
                    path.display(),
                    lineno + 1
                )));
            }
            map.insert(key, value.trim().to_string());
        }
        Ok(ConfigMap(map))
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.0.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .parse::<T>()
                .map(Some)
                .map_err(|_| Error::Usage(format!("config key `{key}`: cannot parse `{raw}`"))),
        }
    }
}

fn merge<T: FromStr>(flag: Option<T>, cfg: &ConfigMap, key: &str, default: T) -> Result<T> {
    Ok(flag.or(cfg.get(key)?).unwrap_or(default))
}

fn merge_opt<T: FromStr>(flag: Option<T>, cfg: &ConfigMap, key: &str) -> Result<Option<T>> {
    Ok(flag.or(cfg.get(key)?))
}

fn parse_sigma_list(raw: &str) -> Result<Vec<f64>> {
    raw.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::Usage(format!("bad sigma value `{s}`")))
        })
        .collect()
}

struct ResolvedCommon {
    params: Params,
    domain: DomainSpec,
    out: PathBuf,
    summary: PathBuf,
    seed: u64,
    threads: Option<usize>,
    cfg: ConfigMap,
}

fn resolve_common(common: &CommonArgs, default_out: &str) -> Result<ResolvedCommon> {
    let cfg = match &common.config {
        Some(path) => ConfigMap::load(path)?,
        None => ConfigMap::empty(),
    };
    let params = Params::new(
        merge(common.gamma, &cfg, "gamma", 1.0)?,
        merge(common.tau, &cfg, "tau", 0.5)?,
        merge(common.alpha, &cfg, "alpha", 1.0)?,
        merge(common.beta, &cfg, "beta", 1.0)?,
        merge(common.kappa, &cfg, "kappa", 1.0)?,
    )
    .map_err(|e| Error::Usage(e.to_string()))?;

    let count = merge(common.count, &cfg, "count", 1000)?;
    let kind = merge(
        common.domain.clone(),
        &cfg,
        "domain",
        "interval".to_string(),
    )?;
    let domain = match kind.as_str() {
        "interval" => DomainSpec::interval(count),
        "square" => DomainSpec::square(count),
        "explicit" => {
            let raw: Option<String> = merge_opt(common.sigmas.clone(), &cfg, "sigmas")?;
            let raw =
                raw.ok_or_else(|| Error::Usage("--domain explicit requires --sigmas".into()))?;
            DomainSpec::explicit(parse_sigma_list(&raw)?)
        }
        other => return Err(Error::Usage(format!("unknown domain kind `{other}`"))),
    }
    .map_err(|e| Error::Usage(e.to_string()))?;

    let out = merge(common.out.clone(), &cfg, "out", PathBuf::from(default_out))?;
    let summary = merge(
        common.summary.clone(),
        &cfg,
        "summary",
        PathBuf::from("summary.txt"),
    )?;
    if out.as_os_str().is_empty() || summary.as_os_str().is_empty() {
        return Err(Error::Usage("output paths must be non-empty".into()));
    }
    let seed = merge(common.seed, &cfg, "seed", checks::DEFAULT_SEED)?;
    let threads = merge_opt(common.threads, &cfg, "threads")?;
    Ok(ResolvedCommon {
        params,
        domain,
        out,
        summary,
        seed,
        threads,
        cfg,
    })
}

fn resolve_grid(grid: &GridArgs, cfg: &ConfigMap) -> Result<(Vec<f64>, TruncationPolicy)> {
    let lo = merge(grid.lambda_min, cfg, "lambda-min", 1e2)?;
    let hi = merge(grid.lambda_max, cfg, "lambda-max", 1e6)?;
    let points = merge(grid.points, cfg, "points", 33)?;
    let grid_vals = log_grid(lo, hi, points).map_err(|e| Error::Usage(e.to_string()))?;
    let policy = TruncationPolicy {
        safety: merge(grid.safety, cfg, "safety", 8.0)?,
        tail_decades: merge(grid.tail_decades, cfg, "tail-decades", 1)?,
    };
    policy.validate().map_err(|e| Error::Usage(e.to_string()))?;
    Ok((grid_vals, policy))
}

fn parse_mode_spec(raw: &str) -> Result<(f64, ModalState)> {
    let (sig, rest) = raw
        .split_once(':')
        .ok_or_else(|| Error::Usage(format!("bad --mode `{raw}`: expected sigma:c0,..,c5")))?;
    let sigma: f64 = sig
        .trim()
        .parse()
        .map_err(|_| Error::Usage(format!("bad sigma in --mode `{raw}`")))?;
    let parts: Vec<f64> = rest
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::Usage(format!("bad coefficient in --mode `{raw}`")))
        })
        .collect::<Result<_>>()?;
    if parts.len() != 6 {
        return Err(Error::Usage(format!(
            "--mode `{raw}` needs 6 coefficients (u_re,u_im,v_re,v_im,th_re,th_im)"
        )));
    }
    Ok((
        sigma,
        ModalState::new(
            C64::new(parts[0], parts[1]),
            C64::new(parts[2], parts[3]),
            C64::new(parts[4], parts[5]),
        ),
    ))
}

/// Parse argv (flags, optional config file) into a validated run plan.
pub fn parse_plan(argv: &[String]) -> Result<RunPlan> {
    let cli = Cli::try_parse_from(argv).map_err(|e| match e.kind() {
        clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
            Error::Usage(format!("__display__{e}"))
        }
        _ => Error::Usage(e.to_string()),
    })?;

    match cli.cmd {
        Cmd::Scan(args) => {
            let rc = resolve_common(&args.common, "scan.csv")?;
            let (grid, policy) = resolve_grid(&args.grid, &rc.cfg)?;
            Ok(plan_from(rc, PlanCommand::Scan { grid, policy }))
        }
        Cmd::Fit(args) => {
            let rc = resolve_common(&args.common, "scan.csv")?;
            let (grid, policy) = resolve_grid(&args.grid, &rc.cfg)?;
            let w0 = merge(args.window_min, &rc.cfg, "window-min", grid[0])?;
            let w1 = merge(
                args.window_max,
                &rc.cfg,
                "window-max",
                *grid.last().unwrap(),
            )?;
            if !(w0 < w1) {
                return Err(Error::Usage(format!(
                    "fit window [{w0}, {w1}] must be increasing"
                )));
            }
            Ok(plan_from(
                rc,
                PlanCommand::Fit {
                    grid,
                    policy,
                    window: (w0, w1),
                },
            ))
        }
        Cmd::Witness(args) => {
            let rc = resolve_common(&args.common, "witness.csv")?;
            if rc.params.tau == 0.0 {
                return Err(Error::Usage(
                    "witness requires tau in (0, 1]: the semigroup is analytic at tau = 0".into(),
                ));
            }
            let n_min = merge(args.n_min, &rc.cfg, "n-min", 1)?;
            let n_max = merge(args.n_max, &rc.cfg, "n-max", 1000)?;
            if n_min == 0 || n_max < n_min {
                return Err(Error::Usage(format!(
                    "witness range [{n_min}, {n_max}] must be a nonempty 1-based interval"
                )));
            }
            Ok(plan_from(
                rc,
                PlanCommand::Witness {
                    n_range: (n_min, n_max),
                },
            ))
        }
        Cmd::Abscissa(args) => {
            let rc = resolve_common(&args.common, "abscissa.csv")?;
            let count = rc.domain.count;
            Ok(plan_from(rc, PlanCommand::Abscissa { count }))
        }
        Cmd::Simulate(args) => {
            let rc = resolve_common(&args.common, "trace.csv")?;
            let mut mode_specs = args.modes.clone();
            if mode_specs.is_empty() {
                if let Some(raw) = rc.cfg.get::<String>("mode")? {
                    mode_specs.push(raw);
                }
            }
            if mode_specs.is_empty() {
                return Err(Error::Usage(
                    "simulate needs at least one --mode sigma:u_re,u_im,v_re,v_im,th_re,th_im"
                        .into(),
                ));
            }
            let mut modes = Vec::new();
            for raw in &mode_specs {
                let (sigma, state) = parse_mode_spec(raw)?;
                if !rc.domain.contains(sigma) {
                    return Err(Error::Usage(format!(
                        "sigma={sigma} is not in the chosen domain spectrum"
                    )));
                }
                modes.push((sigma, state));
            }
            let data = InitialData::new(modes).map_err(|e| Error::Usage(e.to_string()))?;
            let t_max = merge(args.t_max, &rc.cfg, "t-max", 20.0)?;
            let steps = merge(args.steps, &rc.cfg, "steps", 400)?;
            let times = uniform_times(t_max, steps).map_err(|e| Error::Usage(e.to_string()))?;
            let fit_from = merge_opt(args.fit_from, &rc.cfg, "fit-from")?;
            let fit_to = merge_opt(args.fit_to, &rc.cfg, "fit-to")?;
            let fit_window = match (fit_from, fit_to) {
                (Some(a), Some(b)) if a < b => Some((a, b)),
                (None, None) => None,
                _ => {
                    return Err(Error::Usage(
                        "decay fit needs both --fit-from and --fit-to with fit-from < fit-to"
                            .into(),
                    ))
                }
            };
            Ok(plan_from(
                rc,
                PlanCommand::Simulate {
                    data,
                    times,
                    fit_window,
                },
            ))
        }
        Cmd::Check(args) => {
            let rc = resolve_common(&args.common, "summary.txt")?;
            Ok(plan_from(rc, PlanCommand::Check))
        }
    }
}

fn plan_from(rc: ResolvedCommon, command: PlanCommand) -> RunPlan {
    RunPlan {
        command,
        params: rc.params,
        domain: rc.domain,
        out: rc.out,
        summary: rc.summary,
        seed: rc.seed,
        threads: rc.threads,
    }
}

fn fmt_num(x: f64) -> String {
    csvio::format_f64(x)
}

fn execute_inner(plan: &RunPlan) -> Result<i32> {
    match &plan.command {
        PlanCommand::Scan { grid, policy } => {
            let scan = scan_resolvent(grid, &plan.params, &plan.domain, policy)?;
            csvio::write_scan_csv(&plan.out, &scan)?;
            let flagged = scan.rows.iter().filter(|r| !r.tail_ok).count();
            let pairs = vec![
                ("command".to_string(), "scan".to_string()),
                ("rows".to_string(), scan.rows.len().to_string()),
                ("lambda_min".to_string(), fmt_num(grid[0])),
                ("lambda_max".to_string(), fmt_num(*grid.last().unwrap())),
                ("tau".to_string(), fmt_num(plan.params.tau)),
                ("flagged_rows".to_string(), flagged.to_string()),
                ("out".to_string(), plan.out.display().to_string()),
            ];
            csvio::write_summary(&plan.summary, &pairs)?;
            println!(
                "scan: {} rows -> {} ({} flagged)",
                scan.rows.len(),
                plan.out.display(),
                flagged
            );
            Ok(if flagged > 0 { 3 } else { 0 })
        }
        PlanCommand::Fit {
            grid,
            policy,
            window,
        } => {
            let scan = scan_resolvent(grid, &plan.params, &plan.domain, policy)?;
            csvio::write_scan_csv(&plan.out, &scan)?;
            let fit = match fit_decay_exponent(&scan, *window) {
                Ok(fit) => fit,
                Err(e @ Error::UnreliableData { .. }) => {
                    eprintln!("{e}");
                    return Ok(3);
                }
                Err(e) => return Err(e),
            };
            let mut pairs = vec![
                ("command".to_string(), "fit".to_string()),
                ("tau".to_string(), fmt_num(plan.params.tau)),
                ("exponent".to_string(), fmt_num(fit.exponent)),
                ("stderr".to_string(), fmt_num(fit.stderr)),
                ("window_min".to_string(), fmt_num(window.0)),
                ("window_max".to_string(), fmt_num(window.1)),
                ("n_points".to_string(), fit.n_points.to_string()),
            ];
            let mut in_band = None;
            match gevrey_certificate(plan.params.tau) {
                Ok(cert) => {
                    pairs.push(("phi_theory".to_string(), fmt_num(cert.phi_theory)));
                    pairs.push(("phi_ceiling".to_string(), fmt_num(cert.phi_ceiling)));
                    pairs.push(("s_bound".to_string(), fmt_num(cert.s_bound)));
                    in_band = Some(
                        fit.exponent >= cert.phi_theory - checks::EXPONENT_TOL
                            && fit.exponent <= cert.phi_ceiling + checks::EXPONENT_TOL,
                    );
                    pairs.push(("in_band".to_string(), in_band.unwrap().to_string()));
                }
                Err(e) => pairs.push(("certificate".to_string(), e.to_string())),
            }
            if plan.params.tau == 0.5 {
                pairs.push((
                    "note_tau_half".to_string(),
                    "tau=0.5 is the crossover between the two exponent branches; the [1/2,1) \
                     formula s>(3-tau)/(2-2tau) is used, the (0,1/2) branch diverges there"
                        .to_string(),
                ));
            }
            csvio::write_summary(&plan.summary, &pairs)?;
            println!(
                "fit: exponent {:.4} +- {:.4} over lambda in [{}, {}]{}",
                fit.exponent,
                fit.stderr,
                window.0,
                window.1,
                match in_band {
                    Some(true) => ", inside the theoretical band",
                    Some(false) => ", OUTSIDE the theoretical band",
                    None => "",
                }
            );
            Ok(0)
        }
        PlanCommand::Witness { n_range } => {
            let rows = witness_sequence(&plan.params, *n_range, &plan.domain)?;
            csvio::write_witness_csv(&plan.out, &rows)?;
            let mut pairs = vec![
                ("command".to_string(), "witness".to_string()),
                ("tau".to_string(), fmt_num(plan.params.tau)),
                ("n_min".to_string(), n_range.0.to_string()),
                ("n_max".to_string(), n_range.1.to_string()),
                (
                    "growth_first".to_string(),
                    fmt_num(rows.first().unwrap().growth),
                ),
                (
                    "growth_last".to_string(),
                    fmt_num(rows.last().unwrap().growth),
                ),
                (
                    "expected_slope".to_string(),
                    fmt_num(plan.params.tau / (2.0 - plan.params.tau)),
                ),
            ];
            if rows.len() >= 8 {
                let fit = witness_growth_exponent(&rows)?;
                pairs.push(("slope".to_string(), fmt_num(fit.exponent)));
                pairs.push(("slope_stderr".to_string(), fmt_num(fit.stderr)));
            }
            csvio::write_summary(&plan.summary, &pairs)?;
            println!(
                "witness: {} rows -> {} (growth {} .. {})",
                rows.len(),
                plan.out.display(),
                rows.first().unwrap().growth,
                rows.last().unwrap().growth
            );
            Ok(0)
        }
        PlanCommand::Abscissa { count } => {
            let report = spectral_abscissa(&plan.params, &plan.domain, *count)?;
            csvio::write_abscissa_csv(&plan.out, &report)?;
            let pairs = vec![
                ("command".to_string(), "abscissa".to_string()),
                ("tau".to_string(), fmt_num(plan.params.tau)),
                ("modes".to_string(), count.to_string()),
                ("sup_real".to_string(), fmt_num(report.sup_real)),
                ("argmax_sigma".to_string(), fmt_num(report.argmax_sigma)),
            ];
            csvio::write_summary(&plan.summary, &pairs)?;
            println!(
                "abscissa: sup Re = {} at sigma = {} over {} modes",
                report.sup_real, report.argmax_sigma, count
            );
            Ok(0)
        }
        PlanCommand::Simulate {
            data,
            times,
            fit_window,
        } => {
            let trace = simulate(data, &plan.params, times)?;
            csvio::write_trace_csv(&plan.out, &trace)?;
            let mut pairs = vec![
                ("command".to_string(), "simulate".to_string()),
                ("modes".to_string(), data.modes.len().to_string()),
                ("t_max".to_string(), fmt_num(*times.last().unwrap())),
                ("energy_initial".to_string(), fmt_num(trace.energies[0])),
                (
                    "energy_final".to_string(),
                    fmt_num(*trace.energies.last().unwrap()),
                ),
            ];
            if let Some(window) = fit_window {
                let rate = decay_rate_estimate(&trace, *window)?;
                pairs.push(("decay_rate".to_string(), fmt_num(rate)));
            }
            csvio::write_summary(&plan.summary, &pairs)?;
            println!(
                "simulate: {} modes, E(0) = {} -> E({}) = {}",
                data.modes.len(),
                trace.energies[0],
                times.last().unwrap(),
                trace.energies.last().unwrap()
            );
            Ok(0)
        }
        PlanCommand::Check => {
            let report = checks::run_all(plan.seed);
            let width = report
                .verdicts
                .iter()
                .map(|v| v.name.len())
                .max()
                .unwrap_or(0);
            for v in &report.verdicts {
                println!(
                    "{} {:width$}  {}",
                    if v.pass { "PASS" } else { "FAIL" },
                    v.name,
                    v.detail,
                    width = width
                );
            }
            let pass = report.all_pass();
            println!(
                "check: {} / {} passed",
                report.verdicts.iter().filter(|v| v.pass).count(),
                report.verdicts.len()
            );
            csvio::write_summary(&plan.summary, &report.summary_pairs())?;
            Ok(if pass { 0 } else { 1 })
        }
    }
}

/// Execute a plan, honoring the thread cap. Returns the process exit code.
pub fn execute(plan: &RunPlan) -> Result<i32> {
    match plan.threads {
        Some(n) if n > 0 => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Usage(format!("cannot build thread pool: {e}")))?;
            pool.install(|| execute_inner(plan))
        }
        _ => execute_inner(plan),
    }
}

/// Entry point used by main: parse, execute, map errors to exit codes.
pub fn run(argv: &[String]) -> i32 {
    let plan = match parse_plan(argv) {
        Ok(plan) => plan,
        Err(Error::Usage(msg)) => {
            // help/version requests come through here with a marker prefix
            if let Some(text) = msg.strip_prefix("__display__") {
                print!("{text}");
                return 0;
            }
            eprintln!("{msg}");
            return 2;
        }
        Err(e) => {
            eprintln!("{e}");
            return 2;
        }
    };
    match execute(&plan) {
        Ok(code) => code,
        Err(Error::Io(e)) => {
            eprintln!("i/o error: {e}");
            4
        }
        Err(Error::Usage(msg)) => {
            eprintln!("{msg}");
            2
        }
        Err(e) => {
            eprintln!("{e}");
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn argv(parts: &[&str]) -> Vec<String> {
        std::iter::once("thermoplate")
            .chain(parts.iter().copied())
            .map(String::from)
            .collect()
    }

    #[test]
    fn scan_plan_maps_flags() {
        let plan = parse_plan(&argv(&[
            "scan",
            "--tau",
            "0.75",
            "--lambda-min",
            "1e2",
            "--lambda-max",
            "1e6",
            "--points",
            "33",
            "--out",
            "scan.csv",
        ]))
        .unwrap();
        assert_eq!(plan.params.tau, 0.75);
        match plan.command {
            PlanCommand::Scan { grid, policy } => {
                assert_eq!(grid.len(), 33);
                assert_eq!(grid[0], 1e2);
                assert_eq!(*grid.last().unwrap(), 1e6);
                assert_eq!(policy.safety, 8.0);
            }
            other => panic!("wrong command {other:?}"),
        }
    }

    #[test]
    fn defaults_applied() {
        let plan = parse_plan(&argv(&["scan"])).unwrap();
        assert_eq!(plan.params.tau, 0.5);
        assert_eq!(plan.params.gamma, 1.0);
        assert_eq!(plan.out, PathBuf::from("scan.csv"));
        match plan.command {
            PlanCommand::Scan { grid, .. } => {
                assert_eq!(grid.len(), 33);
                assert_eq!(grid[0], 1e2);
            }
            other => panic!("wrong command {other:?}"),
        }
    }

    #[test]
    fn flags_override_config() {
        let dir = std::env::temp_dir().join(format!("tp-cli-test-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let cfg = dir.join("cfg.txt");
        std::fs::write(&cfg, "tau = 0.5\ngamma = 3.0\n").unwrap();
        let plan = parse_plan(&argv(&[
            "scan",
            "--config",
            cfg.to_str().unwrap(),
            "--tau",
            "0.9",
        ]))
        .unwrap();
        assert_eq!(plan.params.tau, 0.9); // flag wins
        assert_eq!(plan.params.gamma, 3.0); // config fills the rest
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn unknown_config_key_rejected() {
        let dir = std::env::temp_dir().join(format!("tp-cli-test2-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let cfg = dir.join("cfg.txt");
        std::fs::write(&cfg, "taw = 0.5\n").unwrap();
        let err = parse_plan(&argv(&["scan", "--config", cfg.to_str().unwrap()]));
        assert!(matches!(err, Err(Error::Usage(_))));
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn witness_rejects_tau_zero() {
        let err = parse_plan(&argv(&["witness", "--tau", "0"]));
        assert!(matches!(err, Err(Error::Usage(_))));
    }

    #[test]
    fn out_of_range_tau_is_usage_error() {
        let err = parse_plan(&argv(&["scan", "--tau", "1.5"]));
        assert!(matches!(err, Err(Error::Usage(_))));
    }

    #[test]
    fn simulate_requires_modes_and_membership() {
        let err = parse_plan(&argv(&["simulate"]));
        assert!(matches!(err, Err(Error::Usage(_))));
        let err = parse_plan(&argv(&["simulate", "--mode", "3:1,0,0,0,0,0"]));
        assert!(matches!(err, Err(Error::Usage(_)))); // 3 is not n^2
        let ok = parse_plan(&argv(&["simulate", "--mode", "4:1,0,0,0,0,0"]));
        assert!(ok.is_ok());
    }

    #[test]
    fn missing_command_is_usage_error() {
        assert!(matches!(parse_plan(&argv(&[])), Err(Error::Usage(_))));
    }
}
