//! Command-line front end: compute quantity reports, run verification
//! suites, hunt counterexamples, and emit sweep CSV.
//!
//! Exit codes: 0 = success / all hold, 1 = violation found (including the
//! intended wy-naive violations), 2 = usage or input error, 3 = numerical
//! failure.

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

use skewlab::checks::DEFAULT_TOL;
use skewlab::io;
use skewlab::skew::{report, SkewParams};
use skewlab::states::{validate_density, Observable, DEFAULT_EIGEN_FLOOR};
use skewlab::trials::{hunt, run_scalar_suite, run_trials, sweep, Target};
use skewlab::Error;

#[derive(Parser)]
#[command(
    name = "skewlab",
    about = "Skew-information quantities and randomized uncertainty-relation verification",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute V, I, J, U for a state/observable pair at given (alpha, beta).
    Compute(ComputeArgs),
    /// Run randomized trials of a named inequality and print the aggregate.
    Verify(VerifyArgs),
    /// Search for a violating witness of a named inequality.
    Hunt(HuntArgs),
    /// Sweep the (alpha, beta) grid and write one CSV row per cell.
    Sweep(SweepArgs),
    /// Evaluate the scalar-level facts on dense grids.
    Scalar(ScalarArgs),
}

#[derive(Args)]
struct ComputeArgs {
    /// Path to the density-matrix JSON file.
    #[arg(long)]
    state: PathBuf,
    /// Path to the observable JSON file.
    #[arg(long)]
    obs: PathBuf,
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    beta: f64,
    /// Invertibility floor demanded of the state's eigenvalues.
    #[arg(long, default_value_t = DEFAULT_EIGEN_FLOOR)]
    floor: f64,
}

#[derive(Args)]
struct VerifyArgs {
    /// Inequality target: heisenberg, schrodinger, luo, thm21, thm31,
    /// wy-naive or chain.
    #[arg(long)]
    ineq: String,
    /// Dimensions to sample, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "2,3,4")]
    dims: Vec<usize>,
    /// Trials per dimension.
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Violation tolerance (relative to max(1, |lhs|, |rhs|)).
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Eigen-floor enforced on sampled states.
    #[arg(long, default_value_t = 1e-6)]
    floor: f64,
    /// Write the aggregate JSON here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct HuntArgs {
    #[arg(long)]
    ineq: String,
    #[arg(long, default_value_t = 2)]
    dim: usize,
    #[arg(long, default_value_t = 100_000)]
    max_trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1e-6)]
    floor: f64,
}

#[derive(Args)]
struct SweepArgs {
    /// Alpha grid values in [0, 2], comma separated.
    #[arg(long, value_delimiter = ',')]
    alphas: Vec<f64>,
    /// Beta grid values in [0, 2], comma separated.
    #[arg(long, value_delimiter = ',')]
    betas: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "2,3")]
    dims: Vec<usize>,
    /// Trials per (cell, dimension).
    #[arg(long, default_value_t = 200)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1e-6)]
    floor: f64,
    /// Write the CSV here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ScalarArgs {
    /// Points on the logarithmic t grid over [1e-3, 1e3].
    #[arg(long, default_value_t = 200)]
    t_points: usize,
    /// Random (alpha, beta) samples per grid point.
    #[arg(long, default_value_t = 400)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::NonConvergence { .. } => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Compute(args) => compute(args),
        Command::Verify(args) => verify(args),
        Command::Hunt(args) => do_hunt(args),
        Command::Sweep(args) => do_sweep(args),
        Command::Scalar(args) => scalar(args),
    }
}

fn compute(args: ComputeArgs) -> Result<ExitCode, Error> {
    let rho = validate_density(&io::load_matrix(&args.state)?, args.floor)?;
    let obs = Observable::new(io::load_matrix(&args.obs)?)?;
    let params = SkewParams::new(args.alpha, args.beta)?;
    let r = report(&rho, &obs, &params)?;
    println!("{}", io::report_to_json(&r));
    Ok(ExitCode::SUCCESS)
}

fn verify(args: VerifyArgs) -> Result<ExitCode, Error> {
    let target: Target = args.ineq.parse()?;
    let agg = run_trials(target, &args.dims, args.trials, args.seed, args.floor, args.tol)?;
    write_out(args.out.as_deref(), &io::aggregate_to_json(&agg), true)?;
    if agg.violations > 0 {
        Ok(ExitCode::from(1))
    } else {
        Ok(ExitCode::SUCCESS)
    }
}

fn do_hunt(args: HuntArgs) -> Result<ExitCode, Error> {
    let target: Target = args.ineq.parse()?;
    match hunt(target, args.dim, args.max_trials, args.seed, args.floor)? {
        Some(record) => {
            println!("{}", io::record_to_json(&record));
            Ok(ExitCode::from(1))
        }
        None => {
            println!("none");
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn do_sweep(args: SweepArgs) -> Result<ExitCode, Error> {
    let rows = sweep(
        &args.alphas,
        &args.betas,
        &args.dims,
        args.trials,
        args.seed,
        args.floor,
    )?;
    write_out(args.out.as_deref(), &io::sweep_to_csv(&rows), false)?;
    let asserted_violations: u64 = rows
        .iter()
        .filter(|r| r.region.asserted())
        .map(|r| r.violations)
        .sum();
    if asserted_violations > 0 {
        Ok(ExitCode::from(1))
    } else {
        Ok(ExitCode::SUCCESS)
    }
}

fn scalar(args: ScalarArgs) -> Result<ExitCode, Error> {
    let r = run_scalar_suite(args.t_points, args.samples, args.seed)?;
    println!(
        "lemma33 trials={} violations={}",
        r.lemma33_trials, r.lemma33_violations
    );
    println!(
        "factorization trials={} max_residual={} violations={}",
        r.factorization_trials,
        io::fmt_f64(r.factorization_max_residual),
        r.factorization_violations
    );
    println!("scalar_f trials={} violations={}", r.f_trials, r.f_violations);
    println!("prior trials={} violations={}", r.prior_trials, r.prior_violations);
    if r.violations() > 0 {
        Ok(ExitCode::from(1))
    } else {
        Ok(ExitCode::SUCCESS)
    }
}

fn write_out(path: Option<&std::path::Path>, text: &str, newline: bool) -> Result<(), Error> {
    match path {
        Some(p) => {
            let body = if newline {
                format!("{text}\n")
            } else {
                text.to_string()
            };
            std::fs::write(p, body)?;
        }
        None => {
            if newline {
                println!("{text}");
            } else {
                print!("{text}");
            }
        }
    }
    Ok(())
}
