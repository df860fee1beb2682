//! The `alasso` command-line tool.
//!
//! Every command resolves its flags into a configuration, writes that
//! configuration as `config.snapshot` next to its outputs, and can be re-run
//! from the snapshot with `--config` to reproduce the outputs exactly.

pub mod curve;
pub mod error;
pub mod fit;
pub mod mc;
pub mod simulate;
mod snapshot;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use error::{CliError, Result};

#[derive(Debug, Parser)]
#[command(name = "alasso", version, about = "Adaptive lasso for time-series regressions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit a model to a CSV file and print a coefficient report.
    Fit(fit::FitArgs),
    /// Test H0: theta_i = theta0 for selected coefficients of a fitted model.
    Test(fit::TestArgs),
    /// Run a Monte Carlo experiment on a built-in or configured design.
    Mc(mc::McArgs),
    /// Tabulate quantiles of the limit law over a penalty grid.
    QuantileCurve(curve::CurveArgs),
    /// Write one simulated sample from a design to CSV.
    Simulate(simulate::SimulateArgs),
}

/// Options shared by the estimation commands.
#[derive(Debug, Clone, Args)]
pub struct EstimationArgs {
    /// Significance level.
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    /// Number of BIC grid points, including lambda_n = 0.
    #[arg(long, default_value_t = 100)]
    pub grid_size: usize,
    /// Intervals without the finite-sample bias correction.
    #[arg(long)]
    pub no_bias_correction: bool,
    /// Heteroskedasticity-robust sandwich covariance (default).
    #[arg(long, conflicts_with = "classical")]
    pub robust: bool,
    /// Homoskedastic covariance sigma^2 C^{-1}.
    #[arg(long)]
    pub classical: bool,
}

impl EstimationArgs {
    pub fn covariance(&self) -> alasso::inference::CovarianceKind {
        if self.classical {
            alasso::inference::CovarianceKind::Classical
        } else {
            alasso::inference::CovarianceKind::Robust
        }
    }

    pub fn check(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(CliError::Usage(format!("--alpha {} is outside (0, 1)", self.alpha)));
        }
        if self.grid_size < 2 {
            return Err(CliError::Usage("--grid-size must be at least 2".into()));
        }
        Ok(())
    }
}

/// Output location and snapshot replay.
#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Re-run from a `config.snapshot` written by an earlier run. Other
    /// settings are taken from the snapshot; only `--out` and `--workers`
    /// still apply.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Fit(args) => fit::cmd_fit(&args),
        Command::Test(args) => fit::cmd_test(&args),
        Command::Mc(args) => mc::cmd_mc(&args),
        Command::QuantileCurve(args) => curve::cmd_quantile_curve(&args),
        Command::Simulate(args) => simulate::cmd_simulate(&args),
    }
}

pub(crate) fn resolve_workers(workers: Option<usize>) -> Result<usize> {
    match workers {
        Some(0) => Err(CliError::Usage("--workers must be positive".into())),
        Some(w) => Ok(w),
        None => Ok(std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)),
    }
}

pub(crate) fn thread_pool(workers: Option<usize>) -> Result<rayon::ThreadPool> {
    let workers = resolve_workers(workers)?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {workers} worker threads: {e}")))
}
