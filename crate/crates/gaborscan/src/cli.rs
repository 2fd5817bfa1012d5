//! Command-line front end.
//!
//! Six subcommands expose the library: `zak` and `pmat` for single
//! evaluations, `pou` for the window hypothesis, `obstruct` for
//! certificates and family enumeration, `test` for one lattice verdict,
//! `scan` for a parameter-plane sweep. Lattice parameters are accepted only
//! as rationals; decimal input is rejected so the density fraction is never
//! guessed from a float.
//!
//! Exit codes: 0 success, 2 usage error, 1 runtime error. With `--json`,
//! machine output goes to stdout and the human summary moves to stderr.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde_json::json;

use crate::frameset::{
    render_heatmap, scan_plane, test_lattice, to_csv, GridSpec, ScanOptions, Verdict, VerdictKind,
    DEFAULT_CERT_SEED,
};
use crate::obstructions::{
    enumerate_excluded, prop2_applies, verify_certificate_exact, verify_certificate_float,
    PropTwoParams,
};
use crate::pmatrix::{build_p, build_p_exact, LatticeParams};
use crate::ranktest::{exact_rank, numeric_rank, singular_values};
use crate::rational::Rational;
use crate::windows::{check_partition_of_unity, Window, DEFAULT_POU_SAMPLES, DEFAULT_POU_TOL};
use crate::zak::{zak, zak_exact, EvaluationPoint};

const DEFAULT_REL_TOL: f64 = 1e-8;
const DEFAULT_ZAK_TOL: f64 = 1e-12;

/// Errors split by exit code: bad input (2) versus failed work (1).
#[derive(Debug)]
enum CliError {
    Usage(String),
    Runtime(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Runtime(m) => m,
        }
    }
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

fn runtime(e: impl std::fmt::Display) -> CliError {
    CliError::Runtime(e.to_string())
}

fn missing(key: &str) -> CliError {
    CliError::Usage(format!(
        "missing required value: pass --{key} or set `{key}` in the config file"
    ))
}

/// Every knob the tool accepts, all optional; the config file fills in
/// whatever the command line leaves unset. Serializes to `key = value`
/// lines and back without loss.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunConfig {
    pub window: Option<String>,
    pub alpha: Option<Rational>,
    pub beta: Option<Rational>,
    pub x: Option<Rational>,
    pub xi: Option<Rational>,
    pub grid: Option<GridSpec>,
    pub tol: Option<f64>,
    pub zak_tol: Option<f64>,
    pub samples: Option<usize>,
    pub m: Option<u32>,
    pub n: Option<u32>,
    pub r: Option<u32>,
    pub j: Option<u32>,
    pub rmax: Option<u32>,
    pub alpha_min: Option<Rational>,
    pub alpha_max: Option<Rational>,
    pub beta_min: Option<Rational>,
    pub beta_max: Option<Rational>,
    pub max_den: Option<u32>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub exact: Option<bool>,
    pub reduce_x: Option<bool>,
    pub force_scan: Option<bool>,
    pub json: Option<bool>,
    pub threads: Option<usize>,
}

impl RunConfig {
    /// Parses `key = value` lines; `#` starts a comment, blank lines are
    /// skipped, unknown keys are usage errors so typos cannot silently
    /// change behavior.
    pub fn from_kv(text: &str) -> Result<RunConfig, String> {
        let mut cfg = RunConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = match raw.find('#') {
                Some(i) => &raw[..i],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected `key = value`", lineno + 1))?;
            let key = key.trim();
            let value = value.trim();
            let fail = |e: &dyn std::fmt::Display| {
                format!("line {}: bad value for `{}`: {}", lineno + 1, key, e)
            };
            match key {
                "window" => cfg.window = Some(value.to_string()),
                "alpha" => cfg.alpha = Some(value.parse().map_err(|e| fail(&e))?),
                "beta" => cfg.beta = Some(value.parse().map_err(|e| fail(&e))?),
                "x" => cfg.x = Some(value.parse().map_err(|e| fail(&e))?),
                "xi" => cfg.xi = Some(value.parse().map_err(|e| fail(&e))?),
                "grid" => cfg.grid = Some(value.parse().map_err(|e| fail(&e))?),
                "tol" => cfg.tol = Some(value.parse().map_err(|e| fail(&e))?),
                "zak-tol" => cfg.zak_tol = Some(value.parse().map_err(|e| fail(&e))?),
                "samples" => cfg.samples = Some(value.parse().map_err(|e| fail(&e))?),
                "m" => cfg.m = Some(value.parse().map_err(|e| fail(&e))?),
                "n" => cfg.n = Some(value.parse().map_err(|e| fail(&e))?),
                "r" => cfg.r = Some(value.parse().map_err(|e| fail(&e))?),
                "j" => cfg.j = Some(value.parse().map_err(|e| fail(&e))?),
                "rmax" => cfg.rmax = Some(value.parse().map_err(|e| fail(&e))?),
                "alpha-min" => cfg.alpha_min = Some(value.parse().map_err(|e| fail(&e))?),
                "alpha-max" => cfg.alpha_max = Some(value.parse().map_err(|e| fail(&e))?),
                "beta-min" => cfg.beta_min = Some(value.parse().map_err(|e| fail(&e))?),
                "beta-max" => cfg.beta_max = Some(value.parse().map_err(|e| fail(&e))?),
                "max-den" => cfg.max_den = Some(value.parse().map_err(|e| fail(&e))?),
                "out" => cfg.out = Some(PathBuf::from(value)),
                "seed" => cfg.seed = Some(value.parse().map_err(|e| fail(&e))?),
                "exact" => cfg.exact = Some(value.parse().map_err(|e| fail(&e))?),
                "reduce-x" => cfg.reduce_x = Some(value.parse().map_err(|e| fail(&e))?),
                "force-scan" => cfg.force_scan = Some(value.parse().map_err(|e| fail(&e))?),
                "json" => cfg.json = Some(value.parse().map_err(|e| fail(&e))?),
                "threads" => cfg.threads = Some(value.parse().map_err(|e| fail(&e))?),
                _ => return Err(format!("line {}: unknown key `{}`", lineno + 1, key)),
            }
        }
        Ok(cfg)
    }

    /// Inverse of `from_kv`: emits only the keys that are set.
    pub fn to_kv(&self) -> String {
        let mut out = String::new();
        let mut put = |key: &str, value: Option<String>| {
            if let Some(v) = value {
                let _ = writeln!(out, "{key} = {v}");
            }
        };
        put("window", self.window.clone());
        put("alpha", self.alpha.as_ref().map(Rational::to_string));
        put("beta", self.beta.as_ref().map(Rational::to_string));
        put("x", self.x.as_ref().map(Rational::to_string));
        put("xi", self.xi.as_ref().map(Rational::to_string));
        put("grid", self.grid.map(|g| g.to_string()));
        put("tol", self.tol.map(|v| format!("{v:e}")));
        put("zak-tol", self.zak_tol.map(|v| format!("{v:e}")));
        put("samples", self.samples.map(|v| v.to_string()));
        put("m", self.m.map(|v| v.to_string()));
        put("n", self.n.map(|v| v.to_string()));
        put("r", self.r.map(|v| v.to_string()));
        put("j", self.j.map(|v| v.to_string()));
        put("rmax", self.rmax.map(|v| v.to_string()));
        put("alpha-min", self.alpha_min.as_ref().map(Rational::to_string));
        put("alpha-max", self.alpha_max.as_ref().map(Rational::to_string));
        put("beta-min", self.beta_min.as_ref().map(Rational::to_string));
        put("beta-max", self.beta_max.as_ref().map(Rational::to_string));
        put("max-den", self.max_den.map(|v| v.to_string()));
        put(
            "out",
            self.out.as_ref().map(|p| p.display().to_string()),
        );
        put("seed", self.seed.map(|v| v.to_string()));
        put("exact", self.exact.map(|v| v.to_string()));
        put("reduce-x", self.reduce_x.map(|v| v.to_string()));
        put("force-scan", self.force_scan.map(|v| v.to_string()));
        put("json", self.json.map(|v| v.to_string()));
        put("threads", self.threads.map(|v| v.to_string()));
        out
    }
}

fn load_config(path: Option<&Path>) -> Result<RunConfig, CliError> {
    let Some(path) = path else {
        return Ok(RunConfig::default());
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read config file {}: {e}", path.display())))?;
    RunConfig::from_kv(&text)
        .map_err(|e| usage(format!("config file {}: {e}", path.display())))
}

#[derive(Parser, Debug)]
#[command(
    name = "gaborscan",
    version,
    about = "Tests rational time-frequency lattices for the frame property"
)]
struct Cli {
    /// Plain-text `key = value` defaults; command-line flags override.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Worker-thread cap for grid scans.
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate the Zak transform of a window at one point.
    Zak(ZakArgs),
    /// Print the sampled Zak matrix of a lattice at one point.
    Pmat(PmatArgs),
    /// Check whether the window's integer shifts sum to one.
    Pou(PouArgs),
    /// Verify a kernel-vector certificate or enumerate an excluded family.
    Obstruct(ObstructArgs),
    /// Decide one lattice: certificates first, then a grid scan.
    Test(TestArgs),
    /// Sweep a rectangle of rational lattices; write CSV and PPM maps.
    Scan(ScanArgs),
}

#[derive(Args, Debug)]
struct ZakArgs {
    /// Window spec: bspline:N, chi:a,b, gauss:width, or poly:file.json.
    #[arg(long, value_name = "SPEC")]
    window: Option<String>,
    /// Shift step, a positive rational.
    #[arg(long)]
    alpha: Option<Rational>,
    /// Time coordinate, rational.
    #[arg(long)]
    x: Option<Rational>,
    /// Frequency coordinate, rational; defaults to 0.
    #[arg(long)]
    xi: Option<Rational>,
    /// Exact arithmetic on the xi = 0 line; prints a rational.
    #[arg(long)]
    exact: bool,
    /// Gaussian tail-truncation tolerance.
    #[arg(long, value_name = "TOL")]
    zak_tol: Option<f64>,
}

#[derive(Args, Debug)]
struct PmatArgs {
    /// Window spec: bspline:N, chi:a,b, gauss:width, or poly:file.json.
    #[arg(long, value_name = "SPEC")]
    window: Option<String>,
    /// Shift step, a positive rational.
    #[arg(long)]
    alpha: Option<Rational>,
    /// Frequency step, a positive rational.
    #[arg(long)]
    beta: Option<Rational>,
    /// Time coordinate, rational; defaults to 0.
    #[arg(long)]
    x: Option<Rational>,
    /// Frequency coordinate, rational; defaults to 0.
    #[arg(long)]
    xi: Option<Rational>,
    /// Exact arithmetic on the xi = 0 line; prints rationals.
    #[arg(long)]
    exact: bool,
    /// Print the matrix rank instead of the entries.
    #[arg(long)]
    rank: bool,
    /// Relative singular-value tolerance for the numeric rank.
    #[arg(long)]
    tol: Option<f64>,
    /// Gaussian tail-truncation tolerance.
    #[arg(long, value_name = "TOL")]
    zak_tol: Option<f64>,
}

#[derive(Args, Debug)]
struct PouArgs {
    /// Window spec: bspline:N, chi:a,b, gauss:width, or poly:file.json.
    #[arg(long, value_name = "SPEC")]
    window: Option<String>,
    /// Sample count for the check.
    #[arg(long)]
    samples: Option<usize>,
    /// Deviation tolerance for non-exact windows.
    #[arg(long)]
    tol: Option<f64>,
    /// Machine-readable report on stdout.
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct ObstructArgs {
    #[command(subcommand)]
    action: Option<ObstructAction>,
    /// Window spec; must be a partition of unity.
    #[arg(long, value_name = "SPEC")]
    window: Option<String>,
    /// Shift denominator: alpha = 1/m.
    #[arg(long)]
    m: Option<u32>,
    /// Integer part of beta = n + j/r.
    #[arg(long)]
    n: Option<u32>,
    /// Fraction denominator of beta.
    #[arg(long)]
    r: Option<u32>,
    /// Fraction numerator of beta, 1 <= j <= r-1.
    #[arg(long)]
    j: Option<u32>,
    /// Verify in exact rational arithmetic.
    #[arg(long)]
    exact: bool,
    /// Time coordinate to verify at; rational, defaults to 0.
    #[arg(long)]
    x: Option<Rational>,
    /// Relative singular-value tolerance for the float check.
    #[arg(long)]
    tol: Option<f64>,
    /// Machine-readable report on stdout.
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand, Debug)]
enum ObstructAction {
    /// List every excluded lattice of the family as CSV.
    Enumerate {
        /// Integer part of beta.
        #[arg(long)]
        n: Option<u32>,
        /// Shift denominator: alpha = 1/m.
        #[arg(long)]
        m: Option<u32>,
        /// Largest fraction denominator to enumerate.
        #[arg(long)]
        rmax: Option<u32>,
    },
}

#[derive(Args, Debug)]
struct TestArgs {
    /// Window spec: bspline:N, chi:a,b, gauss:width, or poly:file.json.
    #[arg(long, value_name = "SPEC")]
    window: Option<String>,
    /// Shift step, a positive rational.
    #[arg(long)]
    alpha: Option<Rational>,
    /// Frequency step, a positive rational.
    #[arg(long)]
    beta: Option<Rational>,
    /// Scan grid as NXxNXI, e.g. 64x64.
    #[arg(long)]
    grid: Option<GridSpec>,
    /// Relative singular-value tolerance for rank drops.
    #[arg(long)]
    tol: Option<f64>,
    /// Gaussian tail-truncation tolerance.
    #[arg(long, value_name = "TOL")]
    zak_tol: Option<f64>,
    /// Scan x over [0, alpha) instead of the full period.
    #[arg(long)]
    reduce_x: bool,
    /// Scan even when a certificate already decides the verdict.
    #[arg(long)]
    force_scan: bool,
    /// Seed for the certificate sample points.
    #[arg(long)]
    seed: Option<u64>,
    /// Machine-readable verdict on stdout, human summary on stderr.
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct ScanArgs {
    /// Window spec: bspline:N, chi:a,b, gauss:width, or poly:file.json.
    #[arg(long, value_name = "SPEC")]
    window: Option<String>,
    /// Smallest alpha, a positive rational.
    #[arg(long)]
    alpha_min: Option<Rational>,
    /// Largest alpha.
    #[arg(long)]
    alpha_max: Option<Rational>,
    /// Smallest beta, a positive rational.
    #[arg(long)]
    beta_min: Option<Rational>,
    /// Largest beta.
    #[arg(long)]
    beta_max: Option<Rational>,
    /// Largest denominator of the lattice parameters.
    #[arg(long)]
    max_den: Option<u32>,
    /// Output prefix; writes <prefix>.csv and <prefix>.ppm.
    #[arg(long, value_name = "PREFIX")]
    out: Option<PathBuf>,
    /// Scan grid as NXxNXI, e.g. 64x64.
    #[arg(long)]
    grid: Option<GridSpec>,
    /// Relative singular-value tolerance for rank drops.
    #[arg(long)]
    tol: Option<f64>,
    /// Gaussian tail-truncation tolerance.
    #[arg(long, value_name = "TOL")]
    zak_tol: Option<f64>,
    /// Scan x over [0, alpha) instead of the full period.
    #[arg(long)]
    reduce_x: bool,
    /// Scan every lattice even when a certificate decides it.
    #[arg(long)]
    force_scan: bool,
    /// Seed for the certificate sample points.
    #[arg(long)]
    seed: Option<u64>,
}

/// Parses argv and runs the selected command, translating every outcome
/// into a process exit code.
pub fn parse_and_dispatch<I: IntoIterator<Item = String>>(argv: I) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.code()
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = load_config(cli.config.as_deref())?;
    let threads = cli.threads.or(cfg.threads);
    let body = || match cli.command {
        Command::Zak(args) => run_zak(args, &cfg),
        Command::Pmat(args) => run_pmat(args, &cfg),
        Command::Pou(args) => run_pou(args, &cfg),
        Command::Obstruct(args) => run_obstruct(args, &cfg),
        Command::Test(args) => run_test(args, &cfg),
        Command::Scan(args) => run_scan(args, &cfg),
    };
    match threads {
        None => body(),
        Some(0) => Err(usage("--threads must be at least 1")),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| runtime(format!("cannot build thread pool: {e}")))?
            .install(body),
    }
}

fn resolve_window(spec: Option<String>, cfg: &RunConfig) -> Result<Window, CliError> {
    let spec = spec.or_else(|| cfg.window.clone()).ok_or_else(|| missing("window"))?;
    Window::from_spec(&spec).map_err(usage)
}

fn positive(value: Rational, name: &str) -> Result<Rational, CliError> {
    if !value.is_positive() {
        return Err(usage(format!("{name} must be a positive rational, got {value}")));
    }
    Ok(value)
}

fn fmt_complex(c: Complex64) -> String {
    format!("{}{:+}j", c.re, c.im)
}

fn run_zak(args: ZakArgs, cfg: &RunConfig) -> Result<(), CliError> {
    let g = resolve_window(args.window, cfg)?;
    let alpha = positive(
        args.alpha.or_else(|| cfg.alpha.clone()).ok_or_else(|| missing("alpha"))?,
        "alpha",
    )?;
    let x = args.x.or_else(|| cfg.x.clone()).ok_or_else(|| missing("x"))?;
    let xi = args.xi.or_else(|| cfg.xi.clone()).unwrap_or_else(Rational::zero);
    let exact = args.exact || cfg.exact.unwrap_or(false);
    if exact {
        if !xi.is_zero() {
            return Err(usage(
                "--exact evaluates the xi = 0 periodization; drop --xi or set it to 0",
            ));
        }
        let value = zak_exact(&g, &alpha, &x).map_err(usage)?;
        println!("{value}");
        return Ok(());
    }
    let zak_tol = args.zak_tol.or(cfg.zak_tol).unwrap_or(DEFAULT_ZAK_TOL);
    let point = EvaluationPoint::exact(x, xi.to_f64()).map_err(usage)?;
    let value = zak(&g, &alpha, &point, zak_tol).map_err(runtime)?;
    println!("{} {}", value.re, value.im);
    Ok(())
}

fn run_pmat(args: PmatArgs, cfg: &RunConfig) -> Result<(), CliError> {
    let g = resolve_window(args.window, cfg)?;
    let alpha = positive(
        args.alpha.or_else(|| cfg.alpha.clone()).ok_or_else(|| missing("alpha"))?,
        "alpha",
    )?;
    let beta = positive(
        args.beta.or_else(|| cfg.beta.clone()).ok_or_else(|| missing("beta"))?,
        "beta",
    )?;
    let x = args.x.or_else(|| cfg.x.clone()).unwrap_or_else(Rational::zero);
    let xi = args.xi.or_else(|| cfg.xi.clone()).unwrap_or_else(Rational::zero);
    let exact = args.exact || cfg.exact.unwrap_or(false);
    let rank = args.rank;
    let lp = LatticeParams::new(alpha, beta).map_err(usage)?;

    if exact {
        if !xi.is_zero() {
            return Err(usage(
                "--exact builds the xi = 0 matrix; drop --xi or set it to 0",
            ));
        }
        let pm = build_p_exact(&g, &lp, &x).map_err(usage)?;
        if rank {
            println!("{}", exact_rank(&pm));
            return Ok(());
        }
        for k in 0..pm.rows() {
            let row: Vec<String> = (0..pm.cols()).map(|l| pm.entry(k, l).to_string()).collect();
            println!("{}", row.join(","));
        }
        return Ok(());
    }

    let zak_tol = args.zak_tol.or(cfg.zak_tol).unwrap_or(DEFAULT_ZAK_TOL);
    let point = EvaluationPoint::exact(x, xi.to_f64()).map_err(usage)?;
    let pm = build_p(&g, &lp, &point, zak_tol).map_err(runtime)?;
    if rank {
        let rel_tol = args.tol.or(cfg.tol).unwrap_or(DEFAULT_REL_TOL);
        println!("{}", numeric_rank(&singular_values(&pm), rel_tol));
        return Ok(());
    }
    for k in 0..pm.rows() {
        let row: Vec<String> = (0..pm.cols()).map(|l| fmt_complex(pm.entry(k, l))).collect();
        println!("{}", row.join(","));
    }
    Ok(())
}

fn run_pou(args: PouArgs, cfg: &RunConfig) -> Result<(), CliError> {
    let g = resolve_window(args.window, cfg)?;
    let samples = args.samples.or(cfg.samples).unwrap_or(DEFAULT_POU_SAMPLES);
    let tol = args.tol.or(cfg.tol).unwrap_or(DEFAULT_POU_TOL);
    let report = check_partition_of_unity(&g, samples, tol).map_err(usage)?;
    let json = args.json || cfg.json.unwrap_or(false);
    if json {
        println!(
            "{}",
            serde_json::to_string(&report).map_err(|e| runtime(format!("serialize: {e}")))?
        );
        eprintln!(
            "partition of unity: {} ({})",
            if report.holds { "holds" } else { "fails" },
            if report.exact { "exact" } else { "sampled" }
        );
        return Ok(());
    }
    println!("holds: {}", report.holds);
    println!("exact: {}", report.exact);
    println!("max deviation: {:e}", report.max_deviation);
    match &report.witness {
        Some(w) => println!("witness: {w}"),
        None => println!("witness: none"),
    }
    Ok(())
}

fn run_obstruct(args: ObstructArgs, cfg: &RunConfig) -> Result<(), CliError> {
    if let Some(ObstructAction::Enumerate { n, m, rmax }) = args.action {
        return run_enumerate(
            n.or(cfg.n).ok_or_else(|| missing("n"))?,
            m.or(cfg.m).ok_or_else(|| missing("m"))?,
            rmax.or(cfg.rmax).ok_or_else(|| missing("rmax"))?,
        );
    }

    let g = resolve_window(args.window, cfg)?;
    let params = PropTwoParams::new(
        args.m.or(cfg.m).ok_or_else(|| missing("m"))?,
        args.n.or(cfg.n).ok_or_else(|| missing("n"))?,
        args.r.or(cfg.r).ok_or_else(|| missing("r"))?,
        args.j.or(cfg.j).ok_or_else(|| missing("j"))?,
    )
    .map_err(usage)?;
    let x = args.x.or_else(|| cfg.x.clone()).unwrap_or_else(Rational::zero);
    let exact = args.exact || cfg.exact.unwrap_or(false);
    let json = args.json || cfg.json.unwrap_or(false);

    let admissibility = prop2_applies(&params);
    let check = if exact {
        verify_certificate_exact(&g, &params, &x).map_err(usage)?
    } else {
        let rel_tol = args.tol.or(cfg.tol).unwrap_or(DEFAULT_REL_TOL);
        verify_certificate_float(&g, &params, x.to_f64(), rel_tol).map_err(usage)?
    };

    if json {
        let report = json!({
            "params": params,
            "admissibility": admissibility,
            "mode": if exact { "exact" } else { "float" },
            "x": x.to_string(),
            "check": check,
        });
        println!(
            "{}",
            serde_json::to_string(&report).map_err(|e| runtime(format!("serialize: {e}")))?
        );
        eprintln!(
            "certificate at x = {x}: rank {} (bound {}, p {})",
            check.rank, check.rank_bound, check.p
        );
        return Ok(());
    }

    println!("params: {params}");
    println!("p: {}", check.p);
    println!("q: {}", params.q());
    println!("rank bound: {}", check.rank_bound);
    println!("mode: {}", if exact { "exact" } else { "float" });
    println!("x: {x}");
    println!(
        "partition of unity: {}",
        if check.pou_certified { "exact" } else { "sampled" }
    );
    println!("max sum residual: {:e}", check.max_sum_residual);
    println!("max kernel residual: {:e}", check.max_kernel_residual);
    match check.residuals_exactly_zero {
        Some(flag) => println!("residuals exactly zero: {flag}"),
        None => println!("residuals exactly zero: n/a"),
    }
    println!("rank: {}", check.rank);
    println!("rank below p: {}", check.rank_below_p);
    Ok(())
}

fn run_enumerate(n: u32, m: u32, rmax: u32) -> Result<(), CliError> {
    println!("m,n,r,j,alpha,beta,p,q,rank_bound");
    for ex in enumerate_excluded(n, m, rmax) {
        println!(
            "{},{},{},{},{},{},{},{},{}",
            ex.params.m(),
            ex.params.n(),
            ex.params.r(),
            ex.params.j(),
            ex.alpha,
            ex.beta,
            ex.p,
            ex.q,
            ex.rank_bound
        );
    }
    Ok(())
}

fn scan_options(
    grid: Option<GridSpec>,
    tol: Option<f64>,
    zak_tol: Option<f64>,
    reduce_x: bool,
    force_scan: bool,
    seed: Option<u64>,
    cfg: &RunConfig,
) -> Result<ScanOptions, CliError> {
    let rel_tol = tol.or(cfg.tol).unwrap_or(DEFAULT_REL_TOL);
    if !(rel_tol.is_finite() && rel_tol > 0.0) {
        return Err(usage(format!("--tol must be positive and finite, got {rel_tol}")));
    }
    let zak_tol = zak_tol.or(cfg.zak_tol).unwrap_or(DEFAULT_ZAK_TOL);
    if !(zak_tol.is_finite() && zak_tol > 0.0) {
        return Err(usage(format!("--zak-tol must be positive and finite, got {zak_tol}")));
    }
    Ok(ScanOptions {
        grid: grid.or(cfg.grid).unwrap_or_default(),
        rel_tol,
        zak_tol,
        reduce_x_domain: reduce_x || cfg.reduce_x.unwrap_or(false),
        force_scan: force_scan || cfg.force_scan.unwrap_or(false),
        cert_seed: seed.or(cfg.seed).unwrap_or(DEFAULT_CERT_SEED),
    })
}

fn describe_verdict(v: &Verdict) -> String {
    match v.kind.source() {
        Some(s) => format!("{} ({})", v.kind.label(), s.label()),
        None => v.kind.label().to_string(),
    }
}

fn run_test(args: TestArgs, cfg: &RunConfig) -> Result<(), CliError> {
    let g = resolve_window(args.window, cfg)?;
    let alpha = positive(
        args.alpha.or_else(|| cfg.alpha.clone()).ok_or_else(|| missing("alpha"))?,
        "alpha",
    )?;
    let beta = positive(
        args.beta.or_else(|| cfg.beta.clone()).ok_or_else(|| missing("beta"))?,
        "beta",
    )?;
    let opts = scan_options(
        args.grid,
        args.tol,
        args.zak_tol,
        args.reduce_x,
        args.force_scan,
        args.seed,
        cfg,
    )?;
    let json = args.json || cfg.json.unwrap_or(false);

    let verdict = test_lattice(&g, &alpha, &beta, &opts).map_err(runtime)?;
    if json {
        println!(
            "{}",
            serde_json::to_string(&verdict.to_json())
                .map_err(|e| runtime(format!("serialize: {e}")))?
        );
        eprintln!("verdict: {}", describe_verdict(&verdict));
        return Ok(());
    }

    println!("alpha: {}", verdict.alpha);
    println!("beta: {}", verdict.beta);
    println!("p: {}", verdict.p);
    println!("q: {}", verdict.q);
    println!("verdict: {}", verdict.kind.label());
    match verdict.kind.source() {
        Some(s) => println!("source: {}", s.label()),
        None => println!("source: none"),
    }
    match &verdict.scan {
        Some(s) => {
            println!("margin: {:e}", s.margin);
            println!("witness: x = {}, xi = {}", s.witness_x, s.witness_xi);
        }
        None => println!("margin: none (certificate decided without scanning)"),
    }
    if verdict.caveats.is_empty() {
        println!("caveats: none");
    } else {
        let list: Vec<&str> = verdict
            .caveats
            .iter()
            .map(|c| match c {
                crate::frameset::Caveat::WindowNotKnownM1 => "window_not_known_m1",
            })
            .collect();
        println!("caveats: {}", list.join(","));
    }
    if let Some(reason) = &verdict.inconclusive_reason {
        println!("reason: {reason}");
    }
    Ok(())
}

fn run_scan(args: ScanArgs, cfg: &RunConfig) -> Result<(), CliError> {
    let g = resolve_window(args.window, cfg)?;
    let alpha_min = positive(
        args.alpha_min.or_else(|| cfg.alpha_min.clone()).ok_or_else(|| missing("alpha-min"))?,
        "alpha-min",
    )?;
    let alpha_max = positive(
        args.alpha_max.or_else(|| cfg.alpha_max.clone()).ok_or_else(|| missing("alpha-max"))?,
        "alpha-max",
    )?;
    let beta_min = positive(
        args.beta_min.or_else(|| cfg.beta_min.clone()).ok_or_else(|| missing("beta-min"))?,
        "beta-min",
    )?;
    let beta_max = positive(
        args.beta_max.or_else(|| cfg.beta_max.clone()).ok_or_else(|| missing("beta-max"))?,
        "beta-max",
    )?;
    let max_den = args.max_den.or(cfg.max_den).ok_or_else(|| missing("max-den"))?;
    let out = args.out.or_else(|| cfg.out.clone()).ok_or_else(|| missing("out"))?;
    let opts = scan_options(
        args.grid,
        args.tol,
        args.zak_tol,
        args.reduce_x,
        args.force_scan,
        args.seed,
        cfg,
    )?;

    let result = scan_plane(
        &g,
        (&alpha_min, &alpha_max),
        (&beta_min, &beta_max),
        max_den,
        &opts,
    )
    .map_err(usage)?;

    let csv_path = PathBuf::from(format!("{}.csv", out.display()));
    let ppm_path = PathBuf::from(format!("{}.ppm", out.display()));
    std::fs::write(&csv_path, to_csv(&result))
        .map_err(|e| runtime(format!("cannot write {}: {e}", csv_path.display())))?;
    render_heatmap(&result, &ppm_path).map_err(runtime)?;

    let count = |k: fn(&VerdictKind) -> bool| result.verdicts.iter().filter(|v| k(&v.kind)).count();
    println!("lattices: {}", result.verdicts.len());
    println!(
        "certified_not_frame: {}",
        count(|k| matches!(k, VerdictKind::CertifiedNotFrame(_)))
    );
    println!(
        "numeric_not_frame: {}",
        count(|k| matches!(k, VerdictKind::NumericNotFrame))
    );
    println!(
        "likely_frame: {}",
        count(|k| matches!(k, VerdictKind::LikelyFrame))
    );
    println!(
        "inconclusive: {}",
        count(|k| matches!(k, VerdictKind::Inconclusive))
    );
    println!("wrote: {}", csv_path.display());
    println!("wrote: {}", ppm_path.display());
    Ok(())
}
