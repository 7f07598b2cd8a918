//! Command-line front end: evaluate factorized specs at disk points, test
//! Frostman conditions, sweep fractional-derivative suprema over Stolz
//! grids, and emit generator / brute-force reference output.

// `!(x > 0.0)` style guards are deliberate: they keep NaN on the rejecting side.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use diskarg::experiments::generators::{gen_conjugate_pairs, gen_power_radial};
use diskarg::experiments::oracles::{oracle_frostman, oracle_naive_product, oracle_naive_rl};
use diskarg::experiments::{
    divisor_stability_run, sweep_csv, verify_theorem_arg, verify_theorem_lnb, SweepConfig,
    SweepReport, VerdictThresholds,
};
use diskarg::measures::{frostman_integral, BoundedFunctionSpec, FrostmanIntegral};
use diskarg::{herglotz, local_zeros, BoundaryMeasure, BoundaryPoint, Complex, DiskPoint};

#[derive(Parser)]
#[command(
    name = "diskarg",
    version,
    about = "Boundary argument growth of bounded analytic functions on the unit disk"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate a spec at one disk point (JSON on stdout).
    Eval(EvalArgs),
    /// Frostman integral of the spec's complete measure at a boundary vertex.
    Frostman(FrostmanArgs),
    /// Per-level suprema of |D^-gamma arg f| over a Stolz grid, with verdict.
    Sweep(SweepArgs),
    /// Same sweep on both components of the compensated log L(z, h, f).
    SweepLnb(SweepLnbArgs),
    /// Emit a generated spec as JSON.
    #[command(subcommand)]
    Gen(GenCmd),
    /// Brute-force reference computations for cross-checking.
    #[command(subcommand)]
    Oracle(OracleCmd),
}

#[derive(Args)]
struct EvalArgs {
    /// Spec JSON file, or "-" for stdin.
    #[arg(long)]
    spec: PathBuf,
    /// Radius of the evaluation point, in [0, 1).
    #[arg(long)]
    r: f64,
    /// Angle of the evaluation point, radians.
    #[arg(long, default_value_t = 0.0)]
    phi: f64,
    /// Also report the compensated log L(z, h, f) at this neighborhood scale.
    #[arg(long)]
    h: Option<f64>,
    /// Accepted tail contribution when the zero set carries a tail descriptor.
    #[arg(long, default_value_t = 0.0)]
    tol: f64,
}

#[derive(Args)]
struct FrostmanArgs {
    /// Spec JSON file, or "-" for stdin.
    #[arg(long)]
    spec: PathBuf,
    #[arg(long = "vertex-theta", default_value_t = 0.0)]
    vertex_theta: f64,
    /// Frostman exponent, in [0, 1).
    #[arg(long)]
    gamma: f64,
}

/// Dyadic level exponents: "4..16" (inclusive range) or "4,8,12".
#[derive(Clone, Debug)]
struct Levels(Vec<i32>);

impl FromStr for Levels {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let exponents: Vec<i32> = if let Some((lo, hi)) = s.split_once("..") {
            let lo: i32 = lo.trim().parse().map_err(|e| format!("bad level '{lo}': {e}"))?;
            let hi: i32 = hi.trim().parse().map_err(|e| format!("bad level '{hi}': {e}"))?;
            if hi < lo {
                return Err(format!("empty level range {lo}..{hi}"));
            }
            (lo..=hi).collect()
        } else {
            s.split(',')
                .map(|t| t.trim().parse().map_err(|e| format!("bad level '{t}': {e}")))
                .collect::<Result<_, _>>()?
        };
        if exponents.is_empty() {
            return Err("no levels given".into());
        }
        if let Some(&j) = exponents.iter().find(|&&j| j < 1) {
            return Err(format!("level exponent {j} < 1 (radii are 1 - 2^-j)"));
        }
        Ok(Levels(exponents))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Csv,
    Json,
}

#[derive(Args)]
struct SweepCommon {
    /// Spec JSON file, or "-" for stdin.
    #[arg(long)]
    spec: PathBuf,
    /// Fractional-derivative order, in [0, 1).
    #[arg(long)]
    gamma: f64,
    /// Stolz aperture parameter, > 1.
    #[arg(long, default_value_t = 2.0)]
    sigma: f64,
    /// Vertex angle of the Stolz region, radians.
    #[arg(long = "vertex-theta", default_value_t = 0.0)]
    vertex_theta: f64,
    /// Radius levels r_j = 1 - 2^-j: "4..16" or a comma list.
    #[arg(long, default_value = "4..16")]
    levels: Levels,
    /// Chebyshev-spaced angles per level across the Stolz aperture.
    #[arg(long = "grid-angles", default_value_t = 65)]
    grid_angles: usize,
    /// Drop the pi/4 probe point from each level circle.
    #[arg(long = "no-quarter-ray")]
    no_quarter_ray: bool,
    /// Relative quadrature tolerance per grid point.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Bounded verdict: last-block peak within this factor of the mid block.
    #[arg(long = "plateau-factor", default_value_t = 2.0)]
    plateau_factor: f64,
    /// Growing verdict: successive block peaks grow by at least this factor.
    #[arg(long = "growth-factor", default_value_t = 2.0)]
    growth_factor: f64,
    #[arg(long, value_enum, default_value_t = OutFormat::Csv)]
    out: OutFormat,
    /// Largest tolerated total of skipped or nonconvergent grid points;
    /// exceeding it exits with code 2 after printing the report.
    #[arg(long = "failure-budget", default_value_t = 0)]
    failure_budget: usize,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: SweepCommon,
    /// Run N random divisor splits instead and emit the 2N part reports.
    #[arg(long = "divisor-splits", default_value_t = 0)]
    divisor_splits: usize,
    /// RNG seed for the divisor splits.
    #[arg(long, default_value_t = 7)]
    seed: u64,
}

#[derive(Args)]
struct SweepLnbArgs {
    #[command(flatten)]
    common: SweepCommon,
    /// Neighborhood scale for the local zero count, in (0, 1).
    #[arg(long)]
    h: f64,
}

#[derive(Subcommand)]
enum GenCmd {
    /// Radial zeros a_k = (1 - k^-beta) e^{i theta}, k = 2..=count+1.
    PowerRadial(PowerRadialArgs),
    /// Replace the zero set of a base spec by its conjugate-closed interleave.
    ConjugatePairs(ConjugatePairsArgs),
    /// Zero-free spec driven by a single boundary atom.
    Atom(AtomArgs),
    /// Zero-free spec driven by the power cdf t^alpha on [0, pi].
    PowerCdf(PowerCdfArgs),
}

#[derive(Args)]
struct PowerRadialArgs {
    /// Gap decay exponent, > 1.
    #[arg(long)]
    beta: f64,
    #[arg(long)]
    count: usize,
    /// Angle of the common ray, radians.
    #[arg(long = "vertex-theta", default_value_t = 0.0)]
    vertex_theta: f64,
}

#[derive(Args)]
struct ConjugatePairsArgs {
    /// Base spec JSON file, or "-" for stdin.
    #[arg(long)]
    spec: PathBuf,
}

#[derive(Args)]
struct AtomArgs {
    /// Atom position, radians.
    #[arg(long, default_value_t = 0.0)]
    theta: f64,
    /// Atom mass; the default 2*pi gives the classical exponential singular
    /// inner function.
    #[arg(long, default_value_t = std::f64::consts::TAU)]
    mass: f64,
}

#[derive(Args)]
struct PowerCdfArgs {
    /// Cdf exponent, in (0, 1].
    #[arg(long)]
    alpha: f64,
    /// Per-segment mass tolerance of the graded mesh refinement.
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
}

#[derive(Subcommand)]
enum OracleCmd {
    /// Plain-loop normalized product over the stored zeros at one point.
    Product(OracleProductArgs),
    /// Product-midpoint fractional integral of arg f along a ray.
    Rl(OracleRlArgs),
    /// Plain-loop Frostman sum over the stored zeros.
    Frostman(FrostmanArgs),
}

#[derive(Args)]
struct OracleProductArgs {
    /// Spec JSON file, or "-" for stdin.
    #[arg(long)]
    spec: PathBuf,
    #[arg(long)]
    r: f64,
    #[arg(long, default_value_t = 0.0)]
    phi: f64,
}

#[derive(Args)]
struct OracleRlArgs {
    /// Spec JSON file, or "-" for stdin.
    #[arg(long)]
    spec: PathBuf,
    /// Fractional order, in (0, 1].
    #[arg(long)]
    gamma: f64,
    /// Upper limit of integration along the ray, in (0, 1).
    #[arg(long)]
    r: f64,
    /// Ray angle, radians.
    #[arg(long, default_value_t = 0.0)]
    phi: f64,
    #[arg(long, default_value_t = 100_000)]
    panels: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.cmd {
        Cmd::Eval(a) => run_eval(a),
        Cmd::Frostman(a) => run_frostman(a),
        Cmd::Sweep(a) => run_sweep(a),
        Cmd::SweepLnb(a) => run_sweep_lnb(a),
        Cmd::Gen(g) => run_gen(g),
        Cmd::Oracle(o) => run_oracle(o),
    }
}

fn load_spec(path: &Path) -> Result<BoundedFunctionSpec> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .context("reading spec from stdin")?;
        s
    } else {
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?
    };
    serde_json::from_str(&text).with_context(|| format!("parsing spec {}", path.display()))
}

fn print_spec(spec: &BoundedFunctionSpec) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(spec)?);
    Ok(())
}

#[derive(Serialize)]
struct EvalOut {
    z: [f64; 2],
    f: [f64; 2],
    modulus: f64,
    arg_f: f64,
    log_f: [f64; 2],
    cut_multiplicity: usize,
    tail_bound: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    l: Option<[f64; 2]>,
}

fn run_eval(args: EvalArgs) -> Result<ExitCode> {
    let spec = load_spec(&args.spec)?;
    let z = DiskPoint::from_polar(args.r, args.phi)?;
    let lf = herglotz::log_f(&spec, z, args.tol)
        .with_context(|| format!("log f at r={} phi={}", args.r, args.phi))?;
    let f = lf.value.exp();
    let l = match args.h {
        Some(h) => {
            let l = local_zeros::l_value(&spec, z, h)
                .with_context(|| format!("compensated log at h={h}"))?;
            Some([l.re, l.im])
        }
        None => None,
    };
    let out = EvalOut {
        z: [z.value().re, z.value().im],
        f: [f.re, f.im],
        modulus: f.norm(),
        arg_f: lf.value.im,
        log_f: [lf.value.re, lf.value.im],
        cut_multiplicity: lf.cut_multiplicity,
        tail_bound: lf.tail_bound,
        l,
    };
    println!("{}", serde_json::to_string_pretty(&out)?);
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct FrostmanOut {
    gamma: f64,
    vertex_theta: f64,
    frostman: FrostmanIntegral,
}

fn run_frostman(args: FrostmanArgs) -> Result<ExitCode> {
    if !(0.0..1.0).contains(&args.gamma) {
        bail!("gamma must lie in [0, 1), got {}", args.gamma);
    }
    let spec = load_spec(&args.spec)?;
    let vertex = BoundaryPoint::new(args.vertex_theta);
    let out = FrostmanOut {
        gamma: args.gamma,
        vertex_theta: vertex.theta(),
        frostman: frostman_integral(&spec.complete_measure(), vertex, args.gamma),
    };
    println!("{}", serde_json::to_string_pretty(&out)?);
    Ok(ExitCode::SUCCESS)
}

fn build_cfg(c: &SweepCommon) -> Result<SweepConfig> {
    if !(0.0..1.0).contains(&c.gamma) {
        bail!("gamma must lie in [0, 1), got {}", c.gamma);
    }
    if !(c.sigma > 1.0) {
        bail!("sigma must exceed 1, got {}", c.sigma);
    }
    if !(c.tol > 0.0) {
        bail!("tol must be positive, got {}", c.tol);
    }
    let mut cfg = SweepConfig::new(c.vertex_theta, c.gamma, c.sigma)
        .with_levels(c.levels.0.iter().copied());
    cfg.grid.grid_angles = c.grid_angles;
    cfg.grid.include_quarter_ray = !c.no_quarter_ray;
    cfg.grid.tol = c.tol;
    cfg.thresholds = VerdictThresholds {
        plateau_factor: c.plateau_factor,
        growth_factor: c.growth_factor,
    };
    Ok(cfg)
}

fn grid_failures(reports: &[SweepReport]) -> usize {
    reports
        .iter()
        .flat_map(|r| &r.levels)
        .map(|row| row.grid_failures)
        .sum()
}

fn emit_reports(reports: &[SweepReport], out: OutFormat, budget: usize) -> Result<ExitCode> {
    match out {
        OutFormat::Json => {
            if let [single] = reports {
                println!("{}", serde_json::to_string_pretty(single)?);
            } else {
                println!("{}", serde_json::to_string_pretty(reports)?);
            }
        }
        OutFormat::Csv => {
            for (i, report) in reports.iter().enumerate() {
                if i > 0 {
                    println!();
                }
                print!("{}", sweep_csv(report));
            }
        }
    }
    let failures = grid_failures(reports);
    if failures > budget {
        eprintln!("{failures} grid points failed or were skipped (budget {budget})");
        return Ok(ExitCode::from(2));
    }
    Ok(ExitCode::SUCCESS)
}

fn run_sweep(args: SweepArgs) -> Result<ExitCode> {
    let spec = load_spec(&args.common.spec)?;
    let cfg = build_cfg(&args.common)?;
    let reports = if args.divisor_splits > 0 {
        divisor_stability_run(&spec, &cfg, args.divisor_splits, args.seed)?
    } else {
        vec![verify_theorem_arg(&spec, &cfg)?]
    };
    emit_reports(&reports, args.common.out, args.common.failure_budget)
}

fn run_sweep_lnb(args: SweepLnbArgs) -> Result<ExitCode> {
    let spec = load_spec(&args.common.spec)?;
    let cfg = build_cfg(&args.common)?;
    let report = verify_theorem_lnb(&spec, args.h, &cfg)?;
    emit_reports(&[report], args.common.out, args.common.failure_budget)
}

fn zero_free_spec(boundary: BoundaryMeasure) -> BoundedFunctionSpec {
    let mut spec = BoundedFunctionSpec::trivial();
    spec.boundary = boundary;
    spec
}

fn run_gen(cmd: GenCmd) -> Result<ExitCode> {
    let spec = match cmd {
        GenCmd::PowerRadial(a) => {
            if !(a.beta > 1.0) {
                bail!("beta must exceed 1 for a summable gap sequence, got {}", a.beta);
            }
            let zeros = gen_power_radial(a.beta, a.count, BoundaryPoint::new(a.vertex_theta));
            let mut spec = BoundedFunctionSpec::trivial();
            spec.zeros = zeros;
            spec
        }
        GenCmd::ConjugatePairs(a) => {
            let mut spec = load_spec(&a.spec)?;
            spec.zeros = gen_conjugate_pairs(&spec.zeros)?;
            spec
        }
        GenCmd::Atom(a) => {
            if !(a.mass > 0.0) {
                bail!("atom mass must be positive, got {}", a.mass);
            }
            zero_free_spec(BoundaryMeasure::from_atoms(vec![(a.theta, a.mass)])?)
        }
        GenCmd::PowerCdf(a) => {
            if !(a.alpha > 0.0 && a.alpha <= 1.0) {
                bail!("alpha must lie in (0, 1], got {}", a.alpha);
            }
            if !(a.tol > 0.0) {
                bail!("tol must be positive, got {}", a.tol);
            }
            zero_free_spec(herglotz::example2_measure_refined(a.alpha, a.tol))
        }
    };
    print_spec(&spec)?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct OracleValue {
    oracle: &'static str,
    value: f64,
}

fn run_oracle(cmd: OracleCmd) -> Result<ExitCode> {
    match cmd {
        OracleCmd::Product(a) => {
            let spec = load_spec(&a.spec)?;
            let z = DiskPoint::from_polar(a.r, a.phi)?;
            let value = oracle_naive_product(&spec.zeros, z.value());
            #[derive(Serialize)]
            struct Out {
                oracle: &'static str,
                value: [f64; 2],
                modulus: f64,
                arg: f64,
            }
            let out = Out {
                oracle: "naive-product",
                value: [value.re, value.im],
                modulus: value.norm(),
                arg: value.arg(),
            };
            println!("{}", serde_json::to_string_pretty(&out)?);
        }
        OracleCmd::Rl(a) => {
            if !(a.gamma > 0.0 && a.gamma <= 1.0) {
                bail!("gamma must lie in (0, 1], got {}", a.gamma);
            }
            if !(a.r > 0.0 && a.r < 1.0) {
                bail!("r must lie in (0, 1), got {}", a.r);
            }
            if a.panels == 0 {
                bail!("panels must be positive");
            }
            let spec = load_spec(&a.spec)?;
            let phi = a.phi;
            let h = |x: f64| herglotz::arg_f(&spec, Complex::from_polar(x, phi));
            let value = oracle_naive_rl(h, a.gamma, a.r, a.panels);
            let out = OracleValue {
                oracle: "product-midpoint-rl",
                value,
            };
            println!("{}", serde_json::to_string_pretty(&out)?);
        }
        OracleCmd::Frostman(a) => {
            if !(0.0..1.0).contains(&a.gamma) {
                bail!("gamma must lie in [0, 1), got {}", a.gamma);
            }
            let spec = load_spec(&a.spec)?;
            let value = oracle_frostman(&spec.zeros, BoundaryPoint::new(a.vertex_theta), a.gamma);
            let out = OracleValue {
                oracle: "naive-frostman",
                value,
            };
            println!("{}", serde_json::to_string_pretty(&out)?);
        }
    }
    Ok(ExitCode::SUCCESS)
}
