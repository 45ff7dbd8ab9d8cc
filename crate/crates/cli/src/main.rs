//! `vn`: simulate, dress, reproduce and verify solutions of the nonlinear
//! von Neumann family `i d(rho)/dt = sum_k [A^{n-k} rho A^k, rho]`.
//!
//! Data goes to the files named by `--out`; diagnostics go to standard
//! error. Exit status is 0 on success, 1 when a verification fails and 2 on
//! any other error.

mod commands;
mod complex;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "vn",
    version,
    about = "Exact and integrated solutions of nonlinear von Neumann equations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate the family equation with fixed-step RK4.
    Simulate(SimulateArgs),
    /// Dress a seed with the binary Darboux transformation.
    Darboux(DarbouxArgs),
    /// Write the data behind the figures and the displayed matrix.
    Reproduce(ReproduceArgs),
    /// Run a verification suite and emit a JSON report.
    Verify(VerifyArgs),
    /// Fit the W equation and the k = 1 profile for a three-level solution.
    #[command(name = "w-report")]
    WReport(WReportArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Observables,
    FullMatrix,
}

#[derive(Clone, Copy, ValueEnum)]
enum Gate {
    /// Only require a Hermitian initial state.
    Hermitian,
    /// Require a density matrix (PSD, unit trace).
    Density,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Example {
    #[value(name = "3x3")]
    ThreeLevel,
    #[value(name = "8x8")]
    EightLevel,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Fig1,
    Fig2,
    Fig3,
    Matrix,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    All,
    Theorem1,
    Theorem2,
    Examples,
    Elliptic,
    Casimir,
}

#[derive(Clone, Copy, ValueEnum)]
enum FaultArg {
    CorruptProjector,
}

#[derive(Args)]
struct Grid {
    #[arg(long, allow_hyphen_values = true)]
    t0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    t1: Option<f64>,
    #[arg(long)]
    dt: Option<f64>,
}

#[derive(Args)]
struct SimulateArgs {
    /// Family index n.
    #[arg(long, default_value_t = 1)]
    n: u32,
    /// Hermitian A: inline matrix JSON or a path to a JSON file.
    #[arg(long)]
    a: String,
    /// Initial state: inline matrix JSON or a path to a JSON file.
    #[arg(long)]
    rho0: String,
    #[command(flatten)]
    grid: Grid,
    #[arg(long, value_enum, default_value = "hermitian")]
    gate: Gate,
    #[arg(long, value_enum, default_value = "observables")]
    mode: Mode,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct DarbouxArgs {
    /// Built-in seed.
    #[arg(long, value_enum, conflicts_with = "bundle")]
    example: Option<Example>,
    /// JSON bundle `{"h", "xi0", "a", "phi0"}` (inline or a path).
    #[arg(long)]
    bundle: Option<String>,
    /// Spectral parameter, e.g. `i` or `0.5-2i`.
    #[arg(long, allow_hyphen_values = true)]
    mu: Option<String>,
    #[command(flatten)]
    grid: Grid,
    #[arg(long, value_enum, default_value = "observables")]
    mode: Mode,
    /// Trajectory CSV; the report goes to the same path with `.report.json`.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ReproduceArgs {
    #[arg(long, value_enum, default_value = "3x3")]
    example: Example,
    #[arg(long, value_enum)]
    target: Target,
    /// Sample times for the `matrix` target.
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        default_value = "-1,0,0.5,2"
    )]
    times: Vec<f64>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(value_enum, default_value = "all")]
    suite: SuiteArg,
    /// Seed for the randomized instances.
    #[arg(long, default_value_t = vn_core::verify::DEFAULT_SEED)]
    seed: u64,
    /// Deliberately corrupt an intermediate quantity (negative control).
    #[arg(long, value_enum)]
    fault: Option<FaultArg>,
    /// Report path; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct WReportArgs {
    /// Built-in three-level solution (default when no matrices are given).
    #[arg(long, value_enum, conflicts_with_all = ["a", "rho0"])]
    example: Option<Example>,
    /// Three-level H for an RK4 run with n = 1 (needs --rho0).
    #[arg(long, requires = "rho0")]
    a: Option<String>,
    #[arg(long, requires = "a")]
    rho0: Option<String>,
    #[command(flatten)]
    grid: Grid,
    /// Report path; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate(a) => commands::simulate(a),
        Command::Darboux(a) => commands::darboux(a),
        Command::Reproduce(a) => commands::reproduce(a),
        Command::Verify(a) => commands::verify(a),
        Command::WReport(a) => commands::w_report(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
