use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use urysohn::{Execution, RefinementRule};

#[derive(Debug, Parser)]
#[command(
    name = "urysohn",
    version,
    about = "Galerkin and Nystrom solvers for Urysohn integral equations"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve at one resolution and tabulate errors at the partition points.
    Solve(SolveArgs),
    /// Run a resolution ladder n, 2n, 4n, ... and tabulate errors and orders.
    Converge(ConvergeArgs),
    /// Print the polynomial constants of the superconvergence expansion.
    Coeffs(CoeffsArgs),
    /// List the built-in problems.
    Problems,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Md,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Galerkin,
    Nystrom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExecArg {
    Sequential,
    Parallel,
}

impl From<ExecArg> for Execution {
    fn from(e: ExecArg) -> Self {
        match e {
            ExecArg::Sequential => Execution::Sequential,
            ExecArg::Parallel => Execution::Parallel,
        }
    }
}

/// `pow` (p = n^r) or `fixed:<p>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PRule(pub RefinementRule);

impl FromStr for PRule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "pow" {
            return Ok(PRule(RefinementRule::Power));
        }
        let p = s
            .strip_prefix("fixed:")
            .ok_or_else(|| format!("expected `pow` or `fixed:<p>`, got `{s}`"))?;
        match p.parse::<usize>() {
            Ok(0) | Err(_) => Err(format!("`{p}` is not a positive integer")),
            Ok(p) => Ok(PRule(RefinementRule::Fixed(p))),
        }
    }
}

#[derive(Debug, Args)]
pub struct Discretisation {
    #[arg(long, default_value = "rpk-aks")]
    pub problem: String,
    /// Polynomial order; approximations are piecewise of degree r - 1.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..=4))]
    pub r: u32,
    /// Refinement rule for the quadrature partition.
    #[arg(long = "p", default_value = "pow")]
    pub p_rule: PRule,
    /// Gauss points per fine subinterval; defaults to the smallest with 2 rho - 1 >= 3r.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=20))]
    pub rho: Option<u32>,
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    #[arg(long, default_value_t = 50, value_parser = clap::value_parser!(u32).range(1..))]
    pub max_iter: u32,
    #[arg(long, value_enum, default_value_t = ExecArg::Parallel)]
    pub execution: ExecArg,
    #[arg(long, value_enum, default_value_t = Format::Md)]
    pub format: Format,
    /// Write to a file instead of stdout.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub disc: Discretisation,
    #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u32).range(1..))]
    pub n: u32,
    #[arg(long, value_enum, default_value_t = Method::Galerkin)]
    pub method: Method,
}

#[derive(Debug, Args)]
pub struct ConvergeArgs {
    #[command(flatten)]
    pub disc: Discretisation,
    /// Comma-separated ladder, each level doubling the previous one.
    #[arg(long, value_delimiter = ',', default_value = "20,40", value_parser = clap::value_parser!(u32).range(1..))]
    pub n: Vec<u32>,
    /// Level whose table is printed in csv and md output; defaults to the first.
    #[arg(long)]
    pub level: Option<u32>,
}

#[derive(Debug, Args)]
pub struct CoeffsArgs {
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..=4))]
    pub r: u32,
}
