//! `quantile-curve`: quantiles of the limit law over a penalty grid.

use std::path::PathBuf;

use alasso::inference::{quantile_curve, CurvePoint, DEFAULT_DRAWS};
use alasso::rng::RNG_IDENTITY;
use clap::Args;
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::{snapshot, RunArgs};

#[derive(Debug, Clone, Args)]
pub struct CurveArgs {
    /// Largest penalty on the grid.
    #[arg(long, default_value_t = 4.0)]
    pub lambda_max: f64,
    /// Grid spacing; the grid starts at 0.
    #[arg(long, default_value_t = 0.05)]
    pub step: f64,
    /// Scalar C.
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
    /// Scalar Omega.
    #[arg(long, default_value_t = 1.0)]
    pub omega: f64,
    /// Monte Carlo draws, shared by every grid point.
    #[arg(long, default_value_t = DEFAULT_DRAWS)]
    pub draws: usize,
    /// Falls back to $ALASSO_SEED, then 1.
    #[arg(long, env = "ALASSO_SEED", default_value_t = 1)]
    pub seed: u64,
    /// The curve shows the (1 - alpha)-quantile of |u|.
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    #[arg(long)]
    pub workers: Option<usize>,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveConfig {
    pub tool_version: String,
    pub rng: String,
    pub lambda_max: f64,
    pub step: f64,
    pub draws: usize,
    pub seed: u64,
    pub alpha: f64,
    /// Row-major.
    pub c: Vec<Vec<f64>>,
    pub omega: Vec<Vec<f64>>,
}

impl CurveConfig {
    pub fn from_args(args: &CurveArgs) -> Result<Self> {
        Ok(CurveConfig {
            tool_version: env!("CARGO_PKG_VERSION").to_owned(),
            rng: RNG_IDENTITY.to_owned(),
            lambda_max: args.lambda_max,
            step: args.step,
            draws: args.draws,
            seed: args.seed,
            alpha: args.alpha,
            c: vec![vec![args.c]],
            omega: vec![vec![args.omega]],
        })
    }

    /// `0, step, 2 step, ..., lambda_max`; `lambda_max` must be a whole
    /// number of steps.
    pub fn grid(&self) -> Result<Vec<f64>> {
        let (max, step) = (self.lambda_max, self.step);
        if !(max.is_finite() && max >= 0.0) {
            return Err(CliError::Usage(format!("--lambda-max {max} must be finite and non-negative")));
        }
        if max == 0.0 {
            return Ok(vec![0.0]);
        }
        if !(step.is_finite() && step > 0.0) {
            return Err(CliError::Usage(format!("--step {step} must be positive")));
        }
        let count = (max / step).round();
        if (count * step - max).abs() > 1e-9 * max || count > 1e6 {
            return Err(CliError::Usage(format!(
                "--lambda-max {max} is not a whole number of --step {step} increments"
            )));
        }
        let count = count as usize;
        Ok((0..=count)
            .map(|k| if k == count { max } else { k as f64 * step })
            .collect())
    }
}

fn matrix(rows: &[Vec<f64>], what: &str) -> Result<DMatrix<f64>> {
    let p = rows.len();
    if p == 0 || rows.iter().any(|r| r.len() != p) {
        return Err(CliError::Usage(format!("{what} must be a non-empty square matrix")));
    }
    Ok(DMatrix::from_fn(p, p, |i, j| rows[i][j]))
}

pub fn compute(cfg: &CurveConfig, workers: Option<usize>) -> Result<Vec<CurvePoint>> {
    let grid = cfg.grid()?;
    let c = matrix(&cfg.c, "C")?;
    let omega = matrix(&cfg.omega, "Omega")?;
    if c.shape() != omega.shape() {
        return Err(CliError::Usage("C and Omega must have the same dimension".into()));
    }
    let pool = crate::thread_pool(workers)?;
    Ok(pool.install(|| quantile_curve(&c, &omega, &grid, cfg.draws, cfg.seed, cfg.alpha))?)
}

pub fn cmd_quantile_curve(args: &CurveArgs) -> Result<()> {
    let cfg = match &args.run.config {
        Some(path) => snapshot::read(path)?,
        None => CurveConfig::from_args(args)?,
    };
    let points = compute(&cfg, args.workers)?;
    let dir = args.run.out.clone().unwrap_or_else(|| PathBuf::from("runs/quantile-curve"));
    snapshot::create_dir(&dir)?;
    let path = dir.join("quantile_curve.csv");
    let mut w = csv::Writer::from_writer(Vec::new());
    for p in &points {
        w.serialize(p).map_err(|e| alasso::error::Error::Csv(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| alasso::error::Error::Csv(e.to_string()))?;
    snapshot::write(&path, &String::from_utf8_lossy(&bytes))?;
    let file = std::fs::File::open(&path).map_err(|e| CliError::io(&path, e))?;
    let back: Vec<CurvePoint> = csv::Reader::from_reader(file)
        .deserialize()
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| alasso::error::Error::Csv(e.to_string()))?;
    if back != points {
        return Err(CliError::Artifact {
            path,
            message: "curve does not read back identically".into(),
        });
    }
    snapshot::write_checked(&dir, &cfg)?;
    println!("{}", path.display());
    Ok(())
}
