use std::f64::consts::{FRAC_PI_3, FRAC_PI_6};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

pub const DEFAULT_SEED: u64 = 0x5eed_f1b0;

/// Fibonacci CMV operators: spectra, quantum walk transport and Lee-Yang zeros.
///
/// Angles are in radians. The full configuration of every run is echoed in the
/// output header, and `rerun` replays it.
#[derive(Parser, Serialize, Deserialize, Clone, Debug, PartialEq)]
#[command(name = "fibcmv", version)]
pub struct Cli {
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Output format; each subcommand has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Seed for every randomized draw.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Worker threads, 0 for one per core. Results do not depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    #[serde(skip)]
    pub threads: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(ValueEnum, Serialize, Deserialize, Clone, Copy, Debug, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Fibonacci word combinatorics.
    #[command(subcommand)]
    Fib(FibCommand),
    /// Grid approximation of the spectrum with the transport constants.
    Spectrum(SpectrumArgs),
    /// Moment profile of the walk started at site 0.
    Walk(WalkArgs),
    /// Lee-Yang zeros of the Fibonacci Ising ring.
    #[command(subcommand)]
    Ising(IsingCommand),
    /// Runs the invariant suites and prints a pass/fail table.
    Verify(VerifyArgs),
    /// Replays the run recorded in the header of an output file.
    Rerun(RerunArgs),
}

#[derive(Subcommand, Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(rename_all = "kebab-case")]
pub enum FibCommand {
    /// Factor count and repeatability at length F_k.
    Census {
        #[arg(long)]
        k: usize,
    },
}

#[derive(Args, Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct CoinArgs {
    #[arg(long, default_value_t = FRAC_PI_3, allow_negative_numbers = true)]
    pub theta_a: f64,
    #[arg(long, default_value_t = FRAC_PI_6, allow_negative_numbers = true)]
    pub theta_b: f64,
}

#[derive(Args, Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub coins: CoinArgs,
    /// Trace-map iterations before a point counts as escaped.
    #[arg(long, default_value_t = 12)]
    pub depth: usize,
    /// Number of equispaced angles.
    #[arg(long, default_value_t = 20_000)]
    pub grid: usize,
}

#[derive(Args, Serialize, Deserialize, Clone, Debug, PartialEq)]
#[command(args_conflicts_with_subcommands = true)]
pub struct WalkArgs {
    #[command(subcommand)]
    pub action: Option<WalkCommand>,
    #[command(flatten)]
    pub profile: WalkProfile,
}

#[derive(Args, Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct WalkProfile {
    #[command(flatten)]
    pub coins: CoinArgs,
    /// Subshift point: `u`, `shift:J` or `rot:THETA`.
    #[arg(long, default_value = "u")]
    pub omega: String,
    #[arg(long, default_value_t = 1000)]
    pub steps: usize,
    /// Moment order.
    #[arg(long, default_value_t = 1.0)]
    pub p: f64,
}

#[derive(Subcommand, Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(rename_all = "kebab-case")]
pub enum WalkCommand {
    /// Growth exponent of the time-averaged moments against the lower bound.
    Exponents(ExponentArgs),
}

#[derive(Args, Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct ExponentArgs {
    #[command(flatten)]
    pub coins: CoinArgs,
    #[arg(long, default_value = "u")]
    pub omega: String,
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    /// The ladder is N = 2^kmin ..= 2^kmax.
    #[arg(long, default_value_t = 4)]
    pub kmin: u32,
    #[arg(long, default_value_t = 12)]
    pub kmax: u32,
    /// Depth and grid of the spectrum used to sample the lower bound.
    #[arg(long, default_value_t = 20)]
    pub depth: usize,
    #[arg(long, default_value_t = 4000)]
    pub grid: usize,
    /// Spectrum points at which the lower bound is evaluated.
    #[arg(long, default_value_t = 64)]
    pub samples: usize,
}

#[derive(Args, Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct RingArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub ja: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub jb: f64,
    #[arg(long, default_value_t = 1.0)]
    pub tau: f64,
    /// Boltzmann constant.
    #[arg(long, default_value_t = 1.0)]
    pub kb: f64,
}

#[derive(ValueEnum, Serialize, Deserialize, Clone, Copy, Debug, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum ZeroMethodArg {
    /// Sign changes of the real normalized discriminant.
    SignChange,
    /// Roots of the expanded discriminant polynomial.
    Polynomial,
    /// Both, failing when they disagree.
    CrossChecked,
}

#[derive(Subcommand, Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(rename_all = "kebab-case")]
pub enum IsingCommand {
    /// Zeros of the partition function on the unit circle with band indices.
    Zeros {
        #[command(flatten)]
        ring: RingArgs,
        /// Subshift point: `u` or `shift:J`.
        #[arg(long, default_value = "u")]
        omega: String,
        #[arg(long)]
        length: usize,
        #[arg(long, value_enum, default_value_t = ZeroMethodArg::SignChange)]
        method: ZeroMethodArg,
        /// Largest Hausdorff distance tolerated by `cross-checked`.
        #[arg(long, default_value_t = 1e-8)]
        tolerance: f64,
    },
    /// Convergence of the zero counting measures along L = F_k.
    Dos {
        #[command(flatten)]
        ring: RingArgs,
        /// Subshift point compared against `u`.
        #[arg(long, default_value = "shift:3")]
        omega: String,
        #[arg(long, default_value_t = 1)]
        kmin: usize,
        #[arg(long, default_value_t = 9)]
        kmax: usize,
    },
}

#[derive(ValueEnum, Serialize, Deserialize, Clone, Copy, Debug, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    All,
    Fib,
    Cmv,
    Trace,
    Walk,
    Ising,
}

#[derive(Args, Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct VerifyArgs {
    #[arg(value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
    /// Reduced sizes.
    #[arg(long)]
    pub quick: bool,
    /// Multiplies every tolerance.
    #[arg(long, default_value_t = 1.0)]
    pub tol_scale: f64,
}

#[derive(Args, Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct RerunArgs {
    /// A CSV or JSON file written by an earlier run.
    pub file: PathBuf,
}
