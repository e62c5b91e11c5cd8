use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(
    name = "fkalg",
    version,
    about = "Fomin-Kirillov algebras: Gröbner bases, Nichols ranks and Hilbert series"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Hilbert series and dimension of E_n (or of a presentation file) via a truncated Gröbner basis.
    Dims(DimsArgs),
    /// Graded dimensions of the Nichols algebra of V_n via symmetrizer ranks.
    Nichols(NicholsArgs),
    /// Compare E_n with the Nichols algebra degree by degree, and their quadratic relations.
    Compare(CompareArgs),
    /// Factor a Hilbert series into t-numbers, or test a prefix for consistency.
    Factor(FactorArgs),
    /// Check the braid relation of the braiding on V_n ⊗ V_n ⊗ V_n.
    Ybe(YbeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Human,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Modular,
    Rational,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Human)]
    pub format: Format,
    /// Write the report to a file instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Leave wall-clock timings out of the report.
    #[arg(long)]
    pub no_timings: bool,
    /// Worker threads (default: all cores). Does not affect results.
    #[arg(long, env = "FKALG_WORKERS", value_parser = clap::value_parser!(u32).range(1..))]
    pub workers: Option<u32>,
}

#[derive(Debug, Args)]
pub struct GroebnerBudgetArgs {
    /// Abort once the basis has more elements than this.
    #[arg(long, env = "FKALG_MAX_BASIS_SIZE", value_parser = clap::value_parser!(u64).range(1..))]
    pub max_basis_size: Option<u64>,
    /// Abort after this many S-polynomial and relation reductions.
    #[arg(long, env = "FKALG_MAX_REDUCTIONS", value_parser = clap::value_parser!(u64).range(1..))]
    pub max_reductions: Option<u64>,
    /// Wall-clock limit in seconds.
    #[arg(long, env = "FKALG_TIME_LIMIT", value_parser = parse_seconds)]
    pub time_limit: Option<f64>,
}

#[derive(Debug, Args)]
pub struct TensorBudgetArgs {
    /// Largest tensor power dimension C(n,2)^k to build.
    #[arg(long, env = "FKALG_MAX_TENSOR_DIM", default_value_t = fkalg::nichols::DEFAULT_MAX_TENSOR_DIM as u64, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_tensor_dim: u64,
}

#[derive(Debug, Args)]
pub struct DimsArgs {
    #[arg(long, value_parser = parse_n, required_unless_present = "presentation")]
    pub n: Option<usize>,
    #[arg(long)]
    pub max_degree: u32,
    /// Homogeneous presentation in JSON instead of the FK relations.
    #[arg(long, conflicts_with = "n")]
    pub presentation: Option<PathBuf>,
    /// Shuffle the generator priority with this seed (identity order if absent).
    #[arg(long)]
    pub order_seed: Option<u64>,
    /// `rational` or a prime modulus.
    #[arg(long, default_value = "rational")]
    pub field: String,
    #[command(flatten)]
    pub budget: GroebnerBudgetArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct NicholsArgs {
    #[arg(long, value_parser = parse_n)]
    pub n: usize,
    #[arg(long)]
    pub max_degree: usize,
    /// Comma-separated primes for the modular backend.
    #[arg(long, value_delimiter = ',', value_parser = parse_big_prime)]
    pub primes: Vec<u64>,
    #[arg(long, value_enum, default_value_t = Backend::Modular)]
    pub backend: Backend,
    #[command(flatten)]
    pub budget: TensorBudgetArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[arg(long, value_parser = parse_n)]
    pub n: usize,
    #[arg(long)]
    pub max_degree: usize,
    #[arg(long, value_delimiter = ',', value_parser = parse_big_prime)]
    pub primes: Vec<u64>,
    #[command(flatten)]
    pub groebner_budget: GroebnerBudgetArgs,
    #[command(flatten)]
    pub tensor_budget: TensorBudgetArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct FactorArgs {
    /// Coefficients, comma separated, constant term first.
    #[arg(required_unless_present = "series", conflicts_with = "series")]
    pub coefficients: Option<String>,
    /// JSON series (`{"coefficients": [...], "complete": ...}` or a list) or plain text.
    #[arg(long)]
    pub series: Option<PathBuf>,
    /// Treat the input as a complete polynomial.
    #[arg(long, conflicts_with = "prefix")]
    pub complete: bool,
    /// Treat the input as a prefix of an unknown series.
    #[arg(long)]
    pub prefix: bool,
    /// Degree through which a prefix is checked (default: all given).
    #[arg(long, requires = "prefix")]
    pub depth: Option<usize>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct YbeArgs {
    #[arg(long, value_parser = parse_n)]
    pub n: usize,
    #[command(flatten)]
    pub out: OutputArgs,
}

fn parse_n(s: &str) -> Result<usize, String> {
    let n: usize = s.parse().map_err(|e| format!("{e}"))?;
    if n < 3 {
        return Err("n must be at least 3".into());
    }
    if n > 255 {
        return Err("n must be at most 255".into());
    }
    Ok(n)
}

fn parse_big_prime(s: &str) -> Result<u64, String> {
    let p: u64 = s.trim().parse().map_err(|e| format!("{e}"))?;
    if p <= 1 << 16 {
        return Err(format!("{p} is not above 2^16"));
    }
    if p >= 1 << 32 {
        return Err(format!("{p} does not fit in 32 bits"));
    }
    if fkalg::ScalarField::prime(p).is_err() {
        return Err(format!("{p} is not prime"));
    }
    Ok(p)
}

fn parse_seconds(s: &str) -> Result<f64, String> {
    let t: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if !(t.is_finite() && t > 0.0) {
        return Err("time limit must be a positive number of seconds".into());
    }
    Ok(t)
}
