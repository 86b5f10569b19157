use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "rayzeros", version, about = "Count and locate the zeros of z^m + c(z^k + conj(z)^k) - 1")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify each of the 2m rays and report its zero count at c
    Classify(PointArgs),
    /// Minimum and maximum zero counts from the case table and the census
    Predict(PointArgs),
    /// Locate every zero at c
    Zeros(PointArgs),
    /// Critical values of c where the count jumps
    Thresholds(PointArgs),
    /// Zero count over a grid of c values
    Sweep(SweepArgs),
    /// Cross-check predictions, located zeros and the grid oracle
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Degree of the analytic term
    #[arg(long)]
    pub m: i64,
    /// Degree of the harmonic term, nonzero with |k| < m
    #[arg(long, allow_hyphen_values = true)]
    pub k: i64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write to this file instead of standard output
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Relative bracket width at which bisection stops
    #[arg(long, env = "RAYZEROS_TOL_RADIUS")]
    pub tol_radius: Option<f64>,
    /// Residual bound, scaled by max(1, |z|^m)
    #[arg(long, env = "RAYZEROS_TOL_RESIDUAL")]
    pub tol_residual: Option<f64>,
}

#[derive(Debug, Args)]
pub struct PointArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub c_min: f64,
    #[arg(long)]
    pub c_max: f64,
    #[arg(long, default_value_t = 200)]
    pub steps: usize,
    #[arg(long, value_enum, default_value_t = Spacing::Log)]
    pub spacing: Spacing,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: Common,
    /// Check a single c; without it, five log-spaced values in [0.01, 100]
    #[arg(long)]
    pub c: Option<f64>,
    /// Angular cells in the oracle grid (doubled on demand up to 1024)
    #[arg(long, default_value_t = 256)]
    pub resolution: usize,
}
