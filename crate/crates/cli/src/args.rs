use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "sphereperc",
    version,
    about = "Percolation of LEO satellite coverage on a sphere"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form report: link geometry, bounds and critical values.
    #[command(args_override_self = true)]
    Analyze(AnalyzeArgs),
    /// Monte Carlo estimate of the percolation probability at one point.
    #[command(args_override_self = true)]
    Simulate(SimulateArgs),
    /// Percolation probability over a grid of N, altitude or slant range.
    #[command(args_override_self = true)]
    Sweep(SweepArgs),
    /// Deterministic full-coverage layout, optionally audited.
    #[command(args_override_self = true)]
    Layout(LayoutArgs),
    /// Hexagonal cell classification on the projection plane.
    #[command(args_override_self = true)]
    Hexgrid(HexgridArgs),
}

/// Shell geometry. Give `--gamma-deg` alone, or `--h` with exactly one of
/// `--elevation-deg`, `--eta-deg`, `--dm-km`, `--gamma-deg`.
#[derive(Debug, Clone, Default, Args)]
pub struct ShellArgs {
    /// Altitude, km.
    #[arg(long = "h", value_name = "KM")]
    pub h: Option<f64>,
    /// Minimum elevation angle, degrees.
    #[arg(long, value_name = "DEG")]
    pub elevation_deg: Option<f64>,
    /// Nadir angle, degrees.
    #[arg(long, value_name = "DEG")]
    pub eta_deg: Option<f64>,
    /// Maximum slant range, km.
    #[arg(long, value_name = "KM")]
    pub dm_km: Option<f64>,
    /// Coverage angle, degrees.
    #[arg(long, value_name = "DEG")]
    pub gamma_deg: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Flat key=value file; command-line flags take precedence.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Output file (stdout when absent).
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Axis {
    #[value(name = "N")]
    N,
    Altitude,
    #[value(name = "slant_range", alias = "slant-range")]
    SlantRange,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Interval {
    Wald,
    ClopperPearson,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub shell: ShellArgs,
    /// Satellite count for p_cov and the critical altitude / slant range.
    #[arg(long = "N", value_name = "N")]
    pub n: Option<u64>,
    /// Hexagon side for the N_c^L / N_c^U bounds, km.
    #[arg(long, value_name = "KM")]
    pub a_km: Option<f64>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: ReportFormat,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct MonteCarlo {
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Reuse one point stream per trial across all grid values.
    #[arg(long)]
    pub coupled: bool,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub shell: ShellArgs,
    #[arg(long = "N", value_name = "N")]
    pub n: u64,
    #[command(flatten)]
    pub mc: MonteCarlo,
    #[arg(long, value_enum, default_value = "wald")]
    pub ci: Interval,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub axis: Axis,
    #[arg(long, allow_negative_numbers = true)]
    pub from: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub to: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub step: f64,
    #[command(flatten)]
    pub shell: ShellArgs,
    /// Fixed satellite count for altitude and slant-range sweeps.
    #[arg(long = "N", value_name = "N")]
    pub n: Option<u64>,
    #[command(flatten)]
    pub mc: MonteCarlo,
    /// Drop infeasible grid points and exit 0 instead of 3.
    #[arg(long)]
    pub skip_infeasible: bool,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct LayoutArgs {
    #[command(flatten)]
    pub shell: ShellArgs,
    /// Uniform sample points for the coverage audit (0 skips it).
    #[arg(long, default_value_t = 0)]
    pub audit_samples: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct HexgridArgs {
    #[command(flatten)]
    pub shell: ShellArgs,
    #[arg(long = "N", value_name = "N")]
    pub n: u64,
    /// Hexagon side, km.
    #[arg(long, value_name = "KM")]
    pub a_km: f64,
    /// Radius of the plane window around the South Pole image, km.
    #[arg(long, value_name = "KM")]
    pub extent_km: f64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Use the worst-case angle gamma_m for every cell.
    #[arg(long)]
    pub uniform: bool,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[command(flatten)]
    pub common: Common,
}

/// Flags that take no value, for config-file expansion.
pub const SWITCHES: &[&str] = &["coupled", "skip-infeasible", "uniform"];
