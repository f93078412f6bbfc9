use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use conformable_core::SchemeKind;

#[derive(Parser, Debug)]
#[command(
    name = "conformable",
    version,
    about = "Conformable fractional Euler schemes: solves, convergence studies and consistency checks",
    allow_negative_numbers = true
)]
pub struct Cli {
    /// Without a subcommand the problem catalog is listed.
    #[command(subcommand)]
    pub command: Option<Command>,
}

impl Cli {
    pub fn command(&self) -> &Command {
        self.command.as_ref().unwrap_or(&Command::ListProblems)
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Integrate one problem and print the trajectory as CSV
    Solve(SolveArgs),
    /// Grid-halving study with error norms and observed orders
    Converge(ConvergeArgs),
    /// Tabulate the implied-alpha consistency ratio of the conformable Euler scheme
    Invalidity(InvalidityArgs),
    /// Compare the limit-definition and discrete derivative estimates with f(t, y(t))
    CfdCheck(CfdCheckArgs),
    /// List the built-in problems
    ListProblems,
    /// Run every acceptance check and print a pass/fail summary
    Reproduce(ReproduceArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum SchemeArg {
    ConformableEuler,
    Modified,
    Classical,
}

impl From<SchemeArg> for SchemeKind {
    fn from(s: SchemeArg) -> Self {
        match s {
            SchemeArg::ConformableEuler => SchemeKind::ConformableEuler,
            SchemeArg::Modified => SchemeKind::ModifiedConformableEuler,
            SchemeArg::Classical => SchemeKind::ClassicalEuler,
        }
    }
}

/// Problem selection shared by the solving subcommands.
#[derive(Args, Debug, Clone, Default)]
pub struct ProblemArgs {
    /// Catalog problem: linear, power, logistic or custom [default: linear, or custom with --rhs]
    #[arg(long)]
    pub problem: Option<String>,
    /// Right-hand side f(t, y) for a custom problem
    #[arg(long, allow_hyphen_values = true)]
    pub rhs: Option<String>,
    /// Exact solution y(t) for a custom problem
    #[arg(long, allow_hyphen_values = true)]
    pub exact: Option<String>,
    /// Fractional order in (0, 1]
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    /// Interval start
    #[arg(long = "a", default_value_t = 0.0)]
    pub a: f64,
    /// Interval end
    #[arg(long = "b", default_value_t = 1.0)]
    pub b: f64,
    /// Initial value [default: problem default, or exact(a) when --exact is given]
    #[arg(long)]
    pub y0: Option<f64>,
    /// Rate of the linear problem
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Exponent of the power problem
    #[arg(long = "p")]
    pub p: Option<f64>,
    /// Growth rate of the logistic problem
    #[arg(long = "r")]
    pub r: Option<f64>,
    /// Carrying capacity of the logistic problem
    #[arg(long)]
    pub kcap: Option<f64>,
}

#[derive(Args, Debug, Clone)]
#[command(allow_negative_numbers = true)]
pub struct SolveArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[arg(long, value_enum, default_value = "modified")]
    pub scheme: SchemeArg,
    /// Number of steps
    #[arg(long = "n", default_value_t = 100)]
    pub n: usize,
    /// Write to this file instead of standard output
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
#[command(allow_negative_numbers = true)]
pub struct ConvergeArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    /// One or more schemes, comma separated or repeated
    #[arg(long, value_enum, value_delimiter = ',', default_value = "modified")]
    pub scheme: Vec<SchemeArg>,
    /// Steps on the coarsest grid
    #[arg(long, default_value_t = 32)]
    pub n0: usize,
    /// Number of grids, each halving the step
    #[arg(long, default_value_t = 5)]
    pub levels: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
#[command(allow_negative_numbers = true)]
pub struct InvalidityArgs {
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    /// Start of the grid
    #[arg(long, default_value_t = 1.0)]
    pub t0: f64,
    /// Node index, held fixed while h shrinks
    #[arg(long = "k", default_value_t = 1)]
    pub k: u64,
    /// Strictly decreasing step sizes
    #[arg(long, value_delimiter = ',', default_value = "0.1,0.01,0.001")]
    pub h_list: Vec<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
#[command(allow_negative_numbers = true)]
pub struct CfdCheckArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    /// Point t > 0 at which the derivative is checked
    #[arg(long, default_value_t = 1.0)]
    pub t0: f64,
    /// Values of eps (limit quotient) and h (discrete quotient)
    #[arg(long, value_delimiter = ',', default_value = "0.01,0.001,0.0001")]
    pub h_list: Vec<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct ReproduceArgs {
    #[arg(long)]
    pub out: Option<PathBuf>,
}
