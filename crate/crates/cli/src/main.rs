//! `marcumq` command-line front end.
//!
//! Exit codes: 0 success, 1 a theorem verdict failed, 2 usage or domain error.

mod commands;
mod output;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "marcumq", version, about = "Generalized Marcum and Nuttall Q-functions")]
pub struct Cli {
    /// Quadrature relative tolerance for eval/bounds/sweep/moment (default 1e-13);
    /// residual tolerance for verify (default 1e-9).
    #[arg(long, global = true)]
    pub tol: Option<f64>,

    /// Evaluate by quadrature even when a closed form exists.
    #[arg(long, global = true)]
    pub force_oracle: bool,

    /// Output format; sweep and pdfdump default to csv, the rest to pretty.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Pretty,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Target {
    /// Q_nu(a, b)
    Marcum,
    /// Standard Nuttall Q_{mu,nu}(a, b)
    #[value(alias = "nuttall-std")]
    Nuttall,
    /// Normalized Nuttall Q_{mu,nu}(a, b) / a^nu
    NuttallNorm,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct PointArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub nu: f64,
    /// Required for the Nuttall targets.
    #[arg(long, allow_negative_numbers = true)]
    pub mu: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub a: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub b: f64,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate one function value.
    Eval {
        #[arg(value_enum)]
        target: Target,
        #[command(flatten)]
        point: PointArgs,
    },
    /// Every applicable bound at one point, with relative errors and the recommended pair.
    Bounds {
        #[arg(value_enum)]
        target: Target,
        #[command(flatten)]
        point: PointArgs,
    },
    /// Evaluate exact values, bounds and asymptotes along one parameter axis.
    Sweep(SweepArgs),
    /// Run the monotonicity and log-concavity theorem suite.
    Verify {
        /// Also scan the open conjectures (informational, never affects the exit code).
        #[arg(long)]
        conjectures: bool,
        /// Only clauses whose id starts with this prefix.
        #[arg(long)]
        only: Option<String>,
    },
    /// Log-density of the noncentral chi-square along a diagonal.
    Pdfdump(PdfArgs),
    /// Truncated moment E[(g^2)^j ; lo < g^2 <= hi] for g^2 ~ sigma^2 chi^2_{n, s^2/sigma^2}.
    ///
    /// Computed as sigma^{2j} [Q~(s/sigma, sqrt(lo)/sigma) - Q~(s/sigma, sqrt(hi)/sigma)]
    /// where Q~ is the normalized Nuttall function with orders (n/2 + 2j, n/2 - 1).
    Moment(MomentArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum SweepAxis {
    Nu,
    Mu,
    A,
    B,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Column {
    Exact,
    ClosedForm,
    Bounds,
    Asym,
    Errors,
}

#[derive(Args, Debug, Clone)]
pub struct SweepArgs {
    #[arg(value_enum)]
    pub target: Target,
    #[arg(long, value_enum, default_value = "b")]
    pub axis: SweepAxis,
    #[arg(long, allow_negative_numbers = true)]
    pub from: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub to: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub step: f64,
    /// Fixed order; ignored when it is the swept axis.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub nu: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub mu: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub a: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub b: f64,
    /// Column groups to emit.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "exact,bounds,asym,errors")]
    pub columns: Vec<Column>,
    /// Print the largest |relative error| of each bound and asymptote instead of rows.
    #[arg(long)]
    pub max_errors: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum PdfMode {
    /// nu = x with lambda fixed: rows (x, ln f_{chi^2_{x, lambda}}(x)).
    Dof,
    /// lambda = x with nu fixed: rows (x, ln f_{chi^2_{nu, x}}(x)).
    Noncentrality,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct PdfArgs {
    #[arg(long, value_enum)]
    pub mode: PdfMode,
    /// The parameter held fixed (lambda in dof mode, nu in noncentrality mode).
    #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
    pub fixed: f64,
    #[arg(long, default_value_t = 0.1, allow_negative_numbers = true)]
    pub from: f64,
    #[arg(long, default_value_t = 20.0, allow_negative_numbers = true)]
    pub to: f64,
    #[arg(long, default_value_t = 0.1, allow_negative_numbers = true)]
    pub step: f64,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct MomentArgs {
    /// Degrees of freedom n (>= 2).
    #[arg(long, allow_negative_numbers = true)]
    pub n: f64,
    /// Amplitude noncentrality s; the chi-square noncentrality is s^2/sigma^2.
    #[arg(long, allow_negative_numbers = true)]
    pub s: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub sigma: f64,
    /// Moment exponent j applied to g^2.
    #[arg(long, allow_negative_numbers = true)]
    pub j: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub lo: f64,
    /// Upper end of the interval; `inf` is accepted.
    #[arg(long, allow_negative_numbers = true)]
    pub hi: f64,
    /// Also integrate the density directly and report the agreement.
    #[arg(long)]
    pub check: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
