//! `altpoly`: batch front end for the altpoly library.
//!
//! Exit codes: 0 on success, 1 on a computational failure (a JSON object
//! `{"kind", "message"}` is written to stderr), 2 on a usage error.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::Failure;

#[derive(Debug, Parser)]
#[command(
    name = "altpoly",
    version,
    about = "Alternative Jacobi polynomials, exponential systems and Z-systems"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate every member of a system on a uniform grid.
    Tabulate {
        #[command(flatten)]
        params: Params,
        /// Grid size, both endpoints included.
        #[arg(long, default_value_t = 11)]
        points: usize,
        /// Right end of the t grid for exponential families.
        #[arg(long, default_value_t = 10.0)]
        tmax: f64,
        #[command(flatten)]
        z: ZArgs,
        #[command(flatten)]
        output: Output,
    },
    /// Monomial coefficients of one member (powers of x, or of e^-t).
    Coeffs {
        #[command(flatten)]
        params: Params,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Zeros of the associated function and their quadrature weights.
    Zeros {
        #[command(flatten)]
        params: Params,
        #[command(flatten)]
        z: ZArgs,
        #[command(flatten)]
        output: Output,
    },
    /// Quadrature rule nodes and weights.
    Quad {
        #[command(flatten)]
        params: Params,
        /// For `exp`, print the rule in x = e^-t on [0, 1].
        #[arg(long)]
        unit: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Run identity checks.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 8)]
        nmax: usize,
        /// List passing checks too.
        #[arg(long)]
        all_checks: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Build a Z-system on [0, 1].
    Zbuild {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        z: ZArgs,
        #[command(flatten)]
        output: Output,
    },
    /// Expansion coefficients of a catalogue function.
    Project {
        #[command(flatten)]
        params: Params,
        /// `const`, `decay:a` (e^-at), `rational:a` (1/(1+at)) or
        /// `gaussian:a` (e^-at^2).
        #[arg(long, value_parser = commands::parse_function)]
        function: commands::Function,
        /// Quadrature nodes for exponential projections.
        #[arg(long)]
        nodes: Option<usize>,
        #[command(flatten)]
        z: ZArgs,
        #[command(flatten)]
        output: Output,
    },
    /// Curves M_n1..M_nn of a marginal system on [0, 1].
    PlotData {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long, default_value_t = 5)]
        n: usize,
        #[arg(long, default_value_t = 512)]
        points: usize,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Ajp,
    A,
    T,
    Exp,
    ExpA,
    ExpT,
    Z,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exact,
    Float,
}

#[derive(Debug, Args)]
pub struct Params {
    #[arg(long, value_enum)]
    pub family: Family,
    /// Integer, decimal or `p/q`.
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub alpha: String,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub beta: String,
    #[arg(long)]
    pub n: usize,
    /// Arithmetic; defaults to `ALTPOLY_MODE`, then to exact when the
    /// parameters are rational.
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,
}

#[derive(Debug, Args)]
pub struct ZArgs {
    #[arg(long, default_value_t = 0.0)]
    pub omega: f64,
    /// Comma-separated candidate alphas; replaces the default set.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub candidates: Option<Vec<f64>>,
    /// Add the fractions p/q (q <= 4) to the default set.
    #[arg(long)]
    pub fractions: bool,
    /// Largest whole number in the default set.
    #[arg(long, default_value_t = altpoly::zfun::DEFAULT_MAX_WHOLE)]
    pub max_whole: u32,
    /// Search alpha over the reals instead of a candidate set.
    #[arg(long, conflicts_with = "candidates")]
    pub real: bool,
}

#[derive(Debug, Args)]
pub struct Output {
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
        Err(Failure::Computation { kind, message }) => {
            eprintln!(
                "{}",
                serde_json::json!({ "kind": kind, "message": message })
            );
            ExitCode::from(1)
        }
    }
}
