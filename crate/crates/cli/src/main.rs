//! `conformal4`: reports on curvature invariants and conformal functionals of
//! explicit four-dimensional metrics.
//!
//! Exit codes: 0 success; 2 precondition violation (bad flag values, degenerate
//! metric, unsupported combination); 3 numerical non-convergence (the report is
//! still written, with diagnostics); 4 parse failure (unreadable or malformed
//! documents). Every failure is also written to stderr as one JSON object.

mod catalog;
mod config;
mod emit;
mod glue;
mod integrals;
mod manifold;
mod points;
mod recipe;
mod solver;

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

use emit::Failure;

#[derive(Parser)]
#[command(
    name = "conformal4",
    version,
    about = "Curvature decomposition, integrated invariants, and conformal minimization on explicit 4-manifolds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SigmaMode {
    /// `R - 6 max(lambda_max(W+), lambda_max(W-))`: both duality halves.
    Full,
    /// `R - 6 lambda_max(W+)`: the self-dual half only (orientation-sensitive).
    Plus,
}

/// Flags shared by the commands that take a manifold.
#[derive(Args)]
pub struct ManifoldArgs {
    /// Catalog name (s4, t4, s3xs1, cp2-fs, s2xs2) or path to a manifold JSON document
    #[arg(long)]
    manifold: String,
    /// Duality orientation: + or - (default +)
    #[arg(long, allow_hyphen_values = true)]
    orientation: Option<String>,
}

/// Flags shared by every command: report destination and format.
#[derive(Args)]
pub struct OutputArgs {
    /// Write the report to this path instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report format (default json; catalog defaults to a plain-text table)
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args)]
pub struct SampleCommand {
    #[command(flatten)]
    manifold: ManifoldArgs,
    /// JSON config path: {"samples": int, "seed": int, "interior_margin": float}
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
pub struct PicCommand {
    #[command(flatten)]
    manifold: ManifoldArgs,
    /// JSON config path: {"samples": int, "seed": int, "interior_margin": float}
    #[arg(long)]
    config: Option<PathBuf>,
    /// Which modified scalar curvature drives the verdict
    #[arg(long, value_enum, default_value_t = SigmaMode::Full)]
    sigma_mode: SigmaMode,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
pub struct IntegralCommand {
    #[command(flatten)]
    manifold: ManifoldArgs,
    /// Per-axis quadrature resolution (default 24)
    #[arg(long)]
    resolution: Option<usize>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
pub struct YamabeCommand {
    #[command(flatten)]
    manifold: ManifoldArgs,
    /// JSON config path: {"cells", "s_schedule", "max_iterations", "gradient_tolerance", "initial"}
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
pub struct GlueCommand {
    /// JSON config path: {"radius", "delta", "lengths", "cells", "exponent", "max_iterations", "gradient_tolerance"}
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
pub struct CatalogCommand {
    /// Per-axis quadrature resolution for the catalog integrals (default 16)
    #[arg(long)]
    resolution: Option<usize>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Subcommand)]
enum Command {
    /// Pointwise curvature tensors at seeded random sample points
    Curvature(SampleCommand),
    /// Two-form splitting: Weyl eigenvalues and modified scalar curvatures at sample points
    Decompose(SampleCommand),
    /// Euler characteristic from the curvature integral
    Gbchern(IntegralCommand),
    /// Integrated invariants: volume, Weyl energies, spectral comparisons
    Invariant(IntegralCommand),
    /// Pointwise positivity verdict for the modified scalar curvature
    Pic(PicCommand),
    /// One-dimensional continuation minimizer for the modified conformal quotient
    Yamabe(YamabeCommand),
    /// Connected-sum neck sweep: minimize, cut at the cheapest slice, transplant, report gaps
    Glue(GlueCommand),
    /// Invariant table for the bundled example manifolds
    Catalog(CatalogCommand),
}

fn dispatch(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Curvature(a) => points::run_curvature(a),
        Command::Decompose(a) => points::run_decompose(a),
        Command::Gbchern(a) => integrals::run_gbchern(a),
        Command::Invariant(a) => integrals::run_invariant(a),
        Command::Pic(a) => points::run_pic(a),
        Command::Yamabe(a) => solver::run(a),
        Command::Glue(a) => glue::run(a),
        Command::Catalog(a) => catalog::run(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("{}", failure.to_stderr_json());
            ExitCode::from(failure.exit)
        }
    }
}
