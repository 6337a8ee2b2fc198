use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::grid::Axis;
use crate::methods::Method;
use crate::params::ParamSet;
use crate::table::Format;

/// Default Fock-dimension cap for the exact method.
pub const DEFAULT_MAX_DIM: usize = 5_000;

#[derive(Debug, Parser)]
#[command(name = "ringbose", version, about = "Attractive bosons on a ring with a single-site well")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Lowest many-body energies at one parameter point.
    Spectrum(SpectrumArgs),
    /// Evaluate methods over a one- or two-axis grid.
    Sweep(SweepArgs),
    /// Ground-state site and momentum occupations.
    Dist(DistArgs),
    /// Run the built-in oracle suite and print a JSON report.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Args, Default)]
pub struct ParamArgs {
    #[arg(long = "M", help = "Number of sites")]
    pub m: Option<usize>,
    #[arg(long = "N", help = "Number of bosons")]
    pub n: Option<usize>,
    #[arg(long = "T", help = "Hopping amplitude")]
    pub t: Option<f64>,
    #[arg(long = "U", help = "Attraction strength (magnitude)")]
    pub u: Option<f64>,
    #[arg(long = "V0", help = "Well depth")]
    pub v0: Option<f64>,
    #[arg(long, help = "T / (U N)")]
    pub tau: Option<f64>,
    #[arg(long, help = "V0 / (U N)")]
    pub v: Option<f64>,
    #[arg(long = "UN-scale", help = "U N energy unit for --tau/--v [default: 1]")]
    pub un_scale: Option<f64>,
    #[arg(long = "max-dim", help = "Fock-dimension cap for the exact method [default: 5000]")]
    pub max_dim: Option<usize>,
    /// `key = value` file; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

impl ParamArgs {
    pub fn flags(&self) -> ParamSet {
        ParamSet {
            m: self.m,
            n: self.n,
            t: self.t,
            u: self.u,
            v0: self.v0,
            tau: self.tau,
            v: self.v,
            un_scale: self.un_scale,
            max_dim: self.max_dim,
        }
    }
}

#[derive(Debug, Clone, Args, Default)]
pub struct OutputArgs {
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Exit with status 3 when any point or method failed.
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Clone, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long, value_enum, default_value_t = Method::Exact)]
    pub method: Method,
    #[arg(long, default_value_t = 5)]
    pub count: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Observable {
    #[value(name = "gs_energy")]
    GsEnergy,
    #[value(name = "levels")]
    Levels,
    #[value(name = "sp_energies")]
    SpEnergies,
}

impl Observable {
    pub fn as_str(self) -> &'static str {
        match self {
            Observable::GsEnergy => "gs_energy",
            Observable::Levels => "levels",
            Observable::SpEnergies => "sp_energies",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// First axis, `name:min:max:steps` with name in tau, v, T, V0, U.
    #[arg(long)]
    pub axis1: Axis,
    /// Optional second axis, same syntax.
    #[arg(long)]
    pub axis2: Option<Axis>,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "exact")]
    pub method: Vec<Method>,
    #[arg(long, value_enum, default_value_t = Observable::GsEnergy)]
    pub observable: Observable,
    /// Levels per point for `--observable levels`.
    #[arg(long, default_value_t = 5)]
    pub count: usize,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct DistArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "exact")]
    pub method: Vec<Method>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ValidateArgs {
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Multiply every Bogoliubov `ν` before the oracle comparison.
    #[arg(long, hide = true, default_value_t = 1.0)]
    pub inject_nu_factor: f64,
}
