use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::ode::IntegratorOptions;

/// Adiabatic field sweeps in Ising and Heisenberg spin chains.
#[derive(Debug, Parser)]
#[command(name = "spinramp", version, about)]
pub struct Cli {
    /// Directory for CSV/JSON output and the run manifest; without it the
    /// artifacts are printed to stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads for scans and per-mode parallelism.
    #[arg(long, global = true, env = "SPINRAMP_WORKERS")]
    pub workers: Option<usize>,
    /// Reduced Planck constant.
    #[arg(long, global = true, default_value_t = 1.0)]
    pub hbar: f64,
    /// Coupling `J`.
    #[arg(long, global = true, default_value_t = 1.0)]
    pub coupling: f64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Energy levels as functions of the field.
    Spectrum(SpectrumArgs),
    /// One sweep (or a family of final fields) with per-channel probabilities.
    Sweep(SweepArgs),
    /// Repeated sweeps along one axis.
    Scan(ScanArgs),
    /// Regenerates the data behind each figure.
    Figures(FiguresArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Ising,
    Heisenberg,
}

#[derive(Debug, Clone, Copy, Args, Serialize)]
pub struct Anisotropy {
    #[arg(long, default_value_t = 0.1, allow_hyphen_values = true)]
    pub dx: f64,
    #[arg(long, default_value_t = 0.3, allow_hyphen_values = true)]
    pub dy: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub dz: f64,
}

impl Anisotropy {
    pub fn delta(&self) -> [f64; 3] {
        [self.dx, self.dy, self.dz]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Magnus for Ising pairs, Dormand–Prince for dense vectors.
    Auto,
    Magnus,
    Dp45,
    Rk4,
}

#[derive(Debug, Clone, Copy, Args, Serialize)]
pub struct IntegratorArgs {
    #[arg(long, value_enum, default_value_t = Method::Auto)]
    pub method: Method,
    /// Relative tolerance for Dormand–Prince.
    #[arg(long, default_value_t = 1e-10)]
    pub rtol: f64,
    /// Absolute tolerance for Dormand–Prince.
    #[arg(long, default_value_t = 1e-12)]
    pub atol: f64,
    /// Step for RK4 (time) or Magnus (phase per step).
    #[arg(long)]
    pub step: Option<f64>,
}

impl IntegratorArgs {
    /// Options for two-level pair dynamics.
    pub fn pair_options(&self) -> IntegratorOptions {
        match self.method {
            Method::Auto | Method::Magnus => IntegratorOptions::magnus(self.step.unwrap_or(0.25)),
            _ => self.dense_options(),
        }
    }

    /// Options for dense state vectors (Magnus is not available there).
    pub fn dense_options(&self) -> IntegratorOptions {
        match self.method {
            Method::Rk4 => IntegratorOptions::rk4(self.step.unwrap_or(1e-3)),
            _ => IntegratorOptions::adaptive(self.rtol, self.atol),
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct SpectrumArgs {
    #[arg(value_enum)]
    pub model: Model,
    #[arg(long)]
    pub n: usize,
    /// Field grid (`a:step:b` or `a,b,c`); defaults to 0:0.01:3 (Ising) or
    /// 0:0.05:5 (Heisenberg).
    #[arg(long, allow_hyphen_values = true)]
    pub g: Option<String>,
    /// Ising: number of lowest levels per field (default: all up to N = 10, else 64).
    #[arg(long)]
    pub levels: Option<usize>,
    #[command(flatten)]
    pub anisotropy: Anisotropy,
}

#[derive(Debug, Args, Serialize)]
#[command(group(ArgGroup::new("speed").args(["rate", "duration", "alpha"]).multiple(false)))]
#[command(group(ArgGroup::new("final").args(["g1", "g1_scan"]).required(true).multiple(false)))]
pub struct SweepArgs {
    #[arg(value_enum)]
    pub model: Model,
    #[arg(long)]
    pub n: usize,
    #[arg(long, allow_hyphen_values = true)]
    pub g0: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub g1: Option<f64>,
    /// Grid of final fields; the ramp runs once to the lowest value.
    #[arg(long)]
    pub g1_scan: Option<String>,
    /// Field change rate `ġ` (negative for a decreasing field).
    #[arg(long, allow_hyphen_values = true)]
    pub rate: Option<f64>,
    /// Sweep duration.
    #[arg(long = "T", id = "duration")]
    pub duration: Option<f64>,
    /// Same as `--rate`.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    /// Adds the adiabatic-approximation estimates.
    #[arg(long)]
    pub with_bounds: bool,
    #[command(flatten)]
    pub anisotropy: Anisotropy,
    #[command(flatten)]
    pub integrator: IntegratorArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
pub enum Axis {
    #[value(name = "N", alias = "n")]
    N,
    Rate,
    G1,
    Epsilon,
}

#[derive(Debug, Args, Serialize)]
pub struct ScanArgs {
    #[arg(value_enum)]
    pub axis: Axis,
    #[arg(long, value_enum, default_value_t = Model::Ising)]
    pub model: Model,
    /// Chain length, or a grid of lengths for the `N` axis.
    #[arg(long)]
    pub n: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub g0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub g1: Option<String>,
    /// Target `p_E` for the Ising `N` axis.
    #[arg(long, default_value_t = 0.05)]
    pub target_pe: f64,
    /// Relative tolerance on the target `p_E`.
    #[arg(long, default_value_t = 1e-3)]
    pub rel_tol: f64,
    /// Rate (or grid of rates for the `rate` axis).
    #[arg(long, allow_hyphen_values = true)]
    pub rate: Option<String>,
    /// Same as `--rate`.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    /// Perturbation strengths for the `epsilon` axis.
    #[arg(long, allow_hyphen_values = true)]
    pub eps: Option<String>,
    /// Random perturbation specs per strength (Heisenberg `epsilon` axis).
    #[arg(long, default_value_t = 4)]
    pub specs: usize,
    /// Seed for random perturbation specs.
    #[arg(long, default_value_t = 2024)]
    pub seed: u64,
    #[command(flatten)]
    pub anisotropy: Anisotropy,
    #[command(flatten)]
    pub integrator: IntegratorArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct FiguresArgs {
    /// `all`, `fig1` … `fig8`, or `energies`.
    pub which: String,
}
