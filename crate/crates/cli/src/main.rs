//! Command-line front end: point/grid generation, radius-map tables, and
//! validation runs.
//!
//! Exit codes: 0 success, 1 validation-test failure, 2 usage error,
//! 3 I/O failure, 4 numeric failure.

use anyhow::{anyhow, Result};
use clap::{Args, Parser, Subcommand};
use crossmap::cloud::{self, Format, PointCloud};
use crossmap::config::Config;
use crossmap::sampler::{effective_threads, Sampler};
use crossmap::target::Target;
use crossmap::validate;
use crossmap_core::cube_gauss::BoundaryPolicy;
use crossmap_core::point::CubePoint;
use crossmap_core::specfun::gamma_p;
use rand::distributions::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "crossmap",
    version,
    about = "Measure-preserving point sets on balls, spheres, and projective spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a point cloud on a target space.
    Gen(GenArgs),
    /// Emit the image of a square grid (polylines for 2-d targets).
    Grid(GridArgs),
    /// Print the radius map r -> rho(r) with residuals.
    Rho(RhoArgs),
    /// Run measure-preservation validation tests.
    Validate(ValidateArgs),
}

#[derive(Args)]
struct GenArgs {
    /// Target descriptor, e.g. sphere:2, cp:3, product:sphere:2+ball:3.
    #[arg(long)]
    target: Option<String>,
    /// Sampler: random, grid:K, stratified:K, halton.
    #[arg(long)]
    sampler: Option<String>,
    /// Point count (lattice samplers fix their own count).
    #[arg(long)]
    count: Option<usize>,
    /// Seed for stochastic samplers.
    #[arg(long)]
    seed: Option<u64>,
    /// Output format: csv, jsonl, or bin.
    #[arg(long)]
    format: Option<String>,
    /// Output file (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Nudge boundary cube coordinates inward instead of rejecting them.
    #[arg(long)]
    clamp: bool,
    /// Re-check every emitted row against the target invariant.
    #[arg(long)]
    verify: bool,
    /// Worker thread cap (also capped by CROSSMAP_THREADS).
    #[arg(long)]
    threads: Option<usize>,
    /// Optional key = value config file; flags win.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct GridArgs {
    /// Target descriptor.
    #[arg(long)]
    target: Option<String>,
    /// Cells per axis; emits the k+1 grid lines per direction.
    #[arg(long)]
    k: Option<usize>,
    /// Sample points per grid line.
    #[arg(long, default_value_t = 65)]
    samples_per_line: usize,
    /// Output format: csv or jsonl (bin only for the lattice fallback).
    #[arg(long)]
    format: Option<String>,
    /// Output file (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Run the equal-measure cell audit for the same k.
    #[arg(long)]
    audit: bool,
    /// Sample count for the audit.
    #[arg(long)]
    n: Option<usize>,
    /// Seed for the audit sampler.
    #[arg(long)]
    seed: Option<u64>,
    /// Optional key = value config file; flags win.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct RhoArgs {
    /// Target descriptor (single-factor targets).
    #[arg(long)]
    target: Option<String>,
    /// Single radius to evaluate.
    #[arg(long, allow_hyphen_values = true)]
    r: Option<f64>,
    /// Grid end when sweeping.
    #[arg(long, default_value_t = 6.0)]
    r_max: f64,
    /// Grid steps when sweeping.
    #[arg(long, default_value_t = 25)]
    steps: usize,
    /// Force the numeric inversion path even when a closed form exists.
    #[arg(long)]
    numeric: bool,
    /// Optional key = value config file; flags win.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct ValidateArgs {
    /// Target descriptor.
    #[arg(long)]
    target: Option<String>,
    /// Test selection: radial-ks, cells, cap, jacobian, hopf-agreement,
    /// njac, or all.
    #[arg(long, default_value = "all")]
    test: String,
    /// Sample count for statistical tests.
    #[arg(long)]
    n: Option<usize>,
    /// Seed for test samplers.
    #[arg(long)]
    seed: Option<u64>,
    /// Cells per axis for the chi-square test.
    #[arg(long)]
    k: Option<usize>,
    /// Negative control: warp the sampler so the tests must fail.
    #[arg(long)]
    warp: bool,
    /// Optional key = value config file; flags win.
    #[arg(long)]
    config: Option<PathBuf>,
}

/// Error category carrying the process exit code.
enum CmdError {
    Usage(anyhow::Error),
    Io(anyhow::Error),
    Numeric(anyhow::Error),
    TestFailure,
}

impl CmdError {
    fn code(&self) -> u8 {
        match self {
            CmdError::TestFailure => 1,
            CmdError::Usage(_) => 2,
            CmdError::Io(_) => 3,
            CmdError::Numeric(_) => 4,
        }
    }
}

fn usage(e: impl Into<anyhow::Error>) -> CmdError {
    CmdError::Usage(e.into())
}

fn numeric(e: impl Into<anyhow::Error>) -> CmdError {
    CmdError::Numeric(e.into())
}

fn io_err(e: impl Into<anyhow::Error>) -> CmdError {
    CmdError::Io(e.into())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(args) => cmd_gen(args),
        Command::Grid(args) => cmd_grid(args),
        Command::Rho(args) => cmd_rho(args),
        Command::Validate(args) => cmd_validate(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            match &e {
                CmdError::Usage(inner) => eprintln!("usage error: {inner:#}"),
                CmdError::Io(inner) => eprintln!("i/o error: {inner:#}"),
                CmdError::Numeric(inner) => eprintln!("numeric error: {inner:#}"),
                CmdError::TestFailure => eprintln!("validation failed"),
            }
            ExitCode::from(e.code())
        }
    }
}

fn load_config(path: &Option<PathBuf>) -> Result<Config, CmdError> {
    Config::load(path.as_deref()).map_err(io_err)
}

fn parse_target(spec: &Option<String>) -> Result<Target, CmdError> {
    let spec = spec
        .as_deref()
        .ok_or_else(|| usage(anyhow!("--target is required")))?;
    Target::parse(spec).map_err(usage)
}

fn open_output(path: &Option<PathBuf>) -> Result<Box<dyn Write>, CmdError> {
    match path {
        Some(path) => {
            let file = std::fs::File::create(path).map_err(io_err)?;
            Ok(Box::new(std::io::BufWriter::new(file)))
        }
        None => Ok(Box::new(std::io::BufWriter::new(std::io::stdout()))),
    }
}

fn cmd_gen(mut args: GenArgs) -> Result<(), CmdError> {
    let config = load_config(&args.config)?;
    config.fill(&mut args.target, "target").map_err(usage)?;
    config.fill(&mut args.sampler, "sampler").map_err(usage)?;
    config.fill(&mut args.count, "count").map_err(usage)?;
    config.fill(&mut args.seed, "seed").map_err(usage)?;
    config.fill(&mut args.format, "format").map_err(usage)?;
    config.fill(&mut args.threads, "threads").map_err(usage)?;

    let target = parse_target(&args.target)?;
    let sampler_text = args.sampler.as_deref().unwrap_or("random");
    let seed = args.seed.unwrap_or(0);
    let sampler = Sampler::parse(sampler_text, target.cube_dim(), seed).map_err(usage)?;
    let count = match (sampler.natural_count(), args.count) {
        (Some(natural), Some(requested)) if natural != requested => {
            return Err(usage(anyhow!(
                "--count {requested} conflicts with the sampler's k^d = {natural}"
            )));
        }
        (Some(natural), _) => natural,
        (None, requested) => requested.unwrap_or(1000),
    };
    let format: Format = args
        .format
        .as_deref()
        .unwrap_or("csv")
        .parse()
        .map_err(usage)?;
    let policy = if args.clamp {
        BoundaryPolicy::Clamp
    } else {
        BoundaryPolicy::Reject
    };
    let threads = effective_threads(args.threads);

    let cloud = cloud::generate(&target, &sampler, count, policy, threads).map_err(numeric)?;
    if args.verify {
        for i in 0..cloud.count {
            if !target.verify_row(cloud.row(i)) {
                return Err(numeric(anyhow!("row {i} violates the target invariant")));
            }
        }
    }
    let mut out = open_output(&args.out)?;
    cloud::write_cloud(&mut out, &cloud, format).map_err(io_err)?;
    out.flush().map_err(io_err)?;
    Ok(())
}

fn cmd_grid(mut args: GridArgs) -> Result<(), CmdError> {
    let config = load_config(&args.config)?;
    config.fill(&mut args.target, "target").map_err(usage)?;
    config.fill(&mut args.k, "k").map_err(usage)?;
    config.fill(&mut args.format, "format").map_err(usage)?;
    config.fill(&mut args.n, "n").map_err(usage)?;
    config.fill(&mut args.seed, "seed").map_err(usage)?;

    let target = parse_target(&args.target)?;
    let k = args.k.ok_or_else(|| usage(anyhow!("--k is required")))?;
    if k == 0 {
        return Err(usage(anyhow!("--k must be >= 1")));
    }
    let format: Format = args
        .format
        .as_deref()
        .unwrap_or("csv")
        .parse()
        .map_err(usage)?;
    let samples = args.samples_per_line.max(2);
    let dim = target.cube_dim();

    let mut out = open_output(&args.out)?;
    if dim == 2 {
        // k+1 horizontal and k+1 vertical grid lines, each sampled at
        // `samples` points; boundary values are clamped just inside.
        let mut polylines: Vec<Vec<Vec<f64>>> = Vec::with_capacity(2 * (k + 1));
        for axis in 0..2usize {
            for line in 0..=k {
                let level = line as f64 / k as f64;
                let mut vertices = Vec::with_capacity(samples);
                for step in 0..samples {
                    let along = step as f64 / (samples - 1) as f64;
                    let raw = if axis == 0 {
                        [along, level]
                    } else {
                        [level, along]
                    };
                    let x = crossmap_core::cube_gauss::interior_point(&raw, BoundaryPolicy::Clamp)
                        .map_err(numeric)?;
                    vertices.push(target.map_row(&x).map_err(numeric)?);
                }
                polylines.push(vertices);
            }
        }
        cloud::write_polylines(&mut out, &polylines, target.ambient_dim(), format)
            .map_err(usage)?;
    } else {
        // Higher-dimensional targets: emit the mapped lattice nodes.
        let nodes = (k + 1)
            .checked_pow(dim as u32)
            .filter(|&n| n <= 10_000_000)
            .ok_or_else(|| usage(anyhow!("lattice (k+1)^{dim} is too large")))?;
        let mut rows = Vec::with_capacity(nodes * target.ambient_dim());
        for index in 0..nodes {
            let mut rest = index;
            let raw: Vec<f64> = (0..dim)
                .map(|_| {
                    let digit = rest % (k + 1);
                    rest /= k + 1;
                    digit as f64 / k as f64
                })
                .collect();
            let x = crossmap_core::cube_gauss::interior_point(&raw, BoundaryPolicy::Clamp)
                .map_err(numeric)?;
            rows.extend(target.map_row(&x).map_err(numeric)?);
        }
        let cloud = PointCloud {
            target: target.name(),
            sampler: format!("lattice:{}", k + 1),
            count: nodes,
            dim_out: target.ambient_dim(),
            rows,
        };
        cloud::write_cloud(&mut out, &cloud, format).map_err(io_err)?;
    }
    out.flush().map_err(io_err)?;

    if args.audit {
        let cells = (k as u64).pow(dim as u32) as usize;
        let n = args.n.unwrap_or_else(|| (20 * cells).max(100_000));
        let sampler = Sampler::parse("random", dim, args.seed.unwrap_or(1)).map_err(usage)?;
        let report = validate::chi2_cell_test(&target, k, n, &sampler).map_err(usage)?;
        eprintln!("{report}");
        if !report.passed {
            return Err(CmdError::TestFailure);
        }
    }
    Ok(())
}

fn cmd_rho(mut args: RhoArgs) -> Result<(), CmdError> {
    let config = load_config(&args.config)?;
    config.fill(&mut args.target, "target").map_err(usage)?;
    config.fill(&mut args.r, "r").map_err(usage)?;

    let target = parse_target(&args.target)?;
    let profile = target.radial_profile().map_err(usage)?;
    let half_dim = profile.dim() as f64 / 2.0;
    let radii: Vec<f64> = match args.r {
        Some(r) => vec![r],
        None => {
            if args.steps == 0 {
                return Err(usage(anyhow!("--steps must be >= 1")));
            }
            (0..=args.steps)
                .map(|i| args.r_max * i as f64 / args.steps as f64)
                .collect()
        }
    };
    let mut out = std::io::BufWriter::new(std::io::stdout());
    writeln!(out, "{:>18} {:>24} {:>14}", "r", "rho", "residual").map_err(io_err)?;
    for r in radii {
        let rho = if args.numeric {
            profile.rho_of_r_numeric(r)
        } else {
            profile.rho_of_r(r)
        }
        .map_err(numeric)?;
        let gauss_mass = gamma_p(half_dim, 0.5 * r * r).map_err(numeric)?;
        let residual = (profile.radial_cdf(rho) - gauss_mass).abs();
        writeln!(out, "{r:>18.12} {rho:>24.16} {residual:>14.3e}").map_err(io_err)?;
    }
    out.flush().map_err(io_err)?;
    Ok(())
}

fn cmd_validate(mut args: ValidateArgs) -> Result<(), CmdError> {
    let config = load_config(&args.config)?;
    config.fill(&mut args.target, "target").map_err(usage)?;
    config.fill(&mut args.n, "n").map_err(usage)?;
    config.fill(&mut args.seed, "seed").map_err(usage)?;
    config.fill(&mut args.k, "k").map_err(usage)?;

    let target = parse_target(&args.target)?;
    let n = args.n.unwrap_or(100_000);
    let seed = args.seed.unwrap_or(1);
    let dim = target.cube_dim();
    let make_sampler = |stream: u64| -> Result<Sampler, CmdError> {
        let sampler = Sampler::parse("random", dim, seed ^ stream).map_err(usage)?;
        Ok(if args.warp { sampler.warped() } else { sampler })
    };

    let mut reports: Vec<validate::TestReport> = Vec::new();
    let selected = args.test.as_str();
    let want = |name: &str| selected == name || selected == "all";

    if want("radial-ks") {
        let sampler = make_sampler(0x726164)?;
        reports.push(validate::ks_radial_test(&target, &sampler, n).map_err(usage)?);
    }
    if want("cells") {
        let k = args.k.unwrap_or_else(|| {
            // Largest k with k^d <= n/20 keeps the expected count sound.
            let budget = (n / 20).max(1) as f64;
            (budget.powf(1.0 / dim as f64).floor() as usize).max(1)
        });
        let sampler = make_sampler(0x63656c)?;
        reports.push(validate::chi2_cell_test(&target, k, n, &sampler).map_err(usage)?);
    }
    if want("cap") {
        if target.name() != "sphere:2" {
            if selected == "cap" {
                return Err(usage(anyhow!("cap test is defined on sphere:2 only")));
            }
        } else {
            let sampler = make_sampler(0x636170)?;
            reports.push(
                validate::cap_test_s2(&[0.0, 0.0, 1.0], std::f64::consts::FRAC_PI_2, &sampler, n)
                    .map_err(usage)?,
            );
        }
    }
    if want("jacobian") {
        match target.radial_profile() {
            Ok(profile) => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(0x6a61636f));
                let d = profile.dim();
                let mut worst: Option<validate::TestReport> = None;
                for _ in 0..20 {
                    // Probe radius in [0.3, 3]; direction from Box-Muller
                    // normals, normalized.
                    let mut y: Vec<f64> = (0..d)
                        .map(|_| {
                            let u1: f64 = rng.sample(Open01);
                            let u2: f64 = rng.sample(Open01);
                            (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
                        })
                        .collect();
                    let norm = y.iter().map(|c| c * c).sum::<f64>().sqrt();
                    let radius = 0.3 + 2.7 * rng.sample::<f64, _>(Open01);
                    for c in y.iter_mut() {
                        *c *= radius / norm;
                    }
                    let report = validate::jacobian_check(&profile, &y, 1e-5).map_err(numeric)?;
                    let replace = match &worst {
                        Some(w) => report.statistic > w.statistic,
                        None => true,
                    };
                    if replace {
                        worst = Some(report);
                    }
                }
                reports.push(worst.expect("at least one probe"));
            }
            Err(e) => {
                if selected == "jacobian" {
                    return Err(usage(e));
                }
            }
        }
    }
    if want("hopf-agreement") {
        if let Target::Hopf(hopf) = &target {
            let sphere = Target::parse(&format!("sphere:{}", hopf.sphere_dim())).map_err(usage)?;
            let sampler_a = make_sampler(0x686f7066)?;
            let sampler_b = make_sampler(0x73706872)?;
            let collect = |sub: &Target, sampler: &Sampler| -> Result<Vec<f64>, CmdError> {
                (0..n)
                    .map(|i| {
                        let x = CubePoint::new(sampler.point(i)).map_err(numeric)?;
                        let row = sub.map_row(&x).map_err(numeric)?;
                        sub.distance_to_base(&row).map_err(numeric)
                    })
                    .collect()
            };
            let mut a = collect(&target, &sampler_a)?;
            let mut b = collect(&sphere, &sampler_b)?;
            reports.push(
                validate::ks_radial_two_sample("hopf-vs-direct", &mut a, &mut b)
                    .map_err(numeric)?,
            );
        } else if selected == "hopf-agreement" {
            return Err(usage(anyhow!("hopf-agreement needs a hopf:<n> target")));
        }
    }
    if want("njac") {
        if let Target::Hopf(hopf) = &target {
            reports.push(validate::hopf_njac_check(hopf.n(), 16, seed).map_err(numeric)?);
        } else if selected == "njac" {
            return Err(usage(anyhow!("njac needs a hopf:<n> target")));
        }
    }

    if reports.is_empty() {
        return Err(usage(anyhow!("unknown or inapplicable test `{selected}`")));
    }
    let mut all_passed = true;
    for report in &reports {
        println!("{report}");
        all_passed &= report.passed;
    }
    if all_passed {
        Ok(())
    } else {
        Err(CmdError::TestFailure)
    }
}
