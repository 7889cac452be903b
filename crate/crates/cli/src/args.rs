use std::path::PathBuf;

use clap::{ArgAction, Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "mixpart",
    version,
    about = "Numerical checks of mixed partial derivatives"
)]
pub struct Cli {
    /// More log output on stderr; repeat for more.
    #[arg(short, long, action = ArgAction::Count, global = true)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the built-in function labels and their domains.
    #[command(name = "list-builtins")]
    ListBuiltins,
    /// Evaluate the function at --at.
    Eval(Opts),
    /// Both first partials at --at.
    Partials(Opts),
    /// Iterated and cross mixed partials at --at.
    Mixed(Opts),
    /// Compare both iterated mixed partials over a grid.
    #[command(name = "schwarz-audit")]
    SchwarzAudit(Opts),
    /// Strong differentiability of one variable at --at.
    Strongdiff(Opts),
    /// Strong mixed derivatives of both orders at --at.
    #[command(name = "verify-theorem1")]
    VerifyTheorem1(Opts),
    /// Uniform Lipschitz constant of a partial derivative across slices.
    Lipcheck(Opts),
    /// Rebuild a function from a density and check its derivatives.
    Tolstov(Opts),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::ListBuiltins => "list-builtins",
            Command::Eval(_) => "eval",
            Command::Partials(_) => "partials",
            Command::Mixed(_) => "mixed",
            Command::SchwarzAudit(_) => "schwarz-audit",
            Command::Strongdiff(_) => "strongdiff",
            Command::VerifyTheorem1(_) => "verify-theorem1",
            Command::Lipcheck(_) => "lipcheck",
            Command::Tolstov(_) => "tolstov",
        }
    }

    pub fn opts(&self) -> Option<&Opts> {
        match self {
            Command::ListBuiltins => None,
            Command::Eval(o)
            | Command::Partials(o)
            | Command::Mixed(o)
            | Command::SchwarzAudit(o)
            | Command::Strongdiff(o)
            | Command::VerifyTheorem1(o)
            | Command::Lipcheck(o)
            | Command::Tolstov(o) => Some(o),
        }
    }
}

/// Options shared by every function subcommand. All optional so that a
/// config file can fill them in.
#[derive(Debug, Default, Args)]
pub struct Opts {
    /// TOML file with defaults for any of these options.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Built-in function label.
    #[arg(long, value_name = "LABEL")]
    pub builtin: Option<String>,
    /// Function of x and y as an expression.
    #[arg(long, value_name = "EXPR", allow_hyphen_values = true)]
    pub expr: Option<String>,
    /// File holding an expression.
    #[arg(long, value_name = "FILE")]
    pub expr_file: Option<PathBuf>,
    /// Density for `tolstov`: a built-in label or an expression.
    #[arg(long, value_name = "LABEL|EXPR", allow_hyphen_values = true)]
    pub density: Option<String>,
    /// Rectangle as a,b,c,d.
    #[arg(long, value_name = "A,B,C,D", allow_hyphen_values = true)]
    pub rect: Option<String>,
    /// Grid size as NXxNY.
    #[arg(long, value_name = "NXxNY")]
    pub grid: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub tol: Option<f64>,
    /// Decreasing radii, comma separated.
    #[arg(long, value_name = "R1,R2,...", value_delimiter = ',')]
    pub radii: Option<Vec<f64>>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Point as x,y.
    #[arg(long, value_name = "X,Y", allow_hyphen_values = true)]
    pub at: Option<String>,
    /// x or y.
    #[arg(long)]
    pub axis: Option<String>,
    /// Modulus threshold for `strongdiff`.
    #[arg(long, allow_hyphen_values = true)]
    pub eta: Option<f64>,
    /// Random pairs per radius.
    #[arg(long)]
    pub pairs: Option<usize>,
    /// Uniform slices for `lipcheck` (as many random ones are added).
    #[arg(long)]
    pub slices: Option<usize>,
    /// Samples per slice for `lipcheck`.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Quadrature panels per unit length.
    #[arg(long)]
    pub panels: Option<u32>,
    /// Quadrature refinement levels.
    #[arg(long)]
    pub levels: Option<u32>,
    /// central, forward, backward or richardson.
    #[arg(long)]
    pub scheme: Option<String>,
    /// Write the JSON report here instead of stdout.
    #[arg(long, value_name = "FILE")]
    pub json: Option<PathBuf>,
    /// Write per-point CSV here.
    #[arg(long, value_name = "FILE")]
    pub csv: Option<PathBuf>,
}
