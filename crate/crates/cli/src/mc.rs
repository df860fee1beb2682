//! `mc`: Monte Carlo experiments.

use std::path::PathBuf;

use alasso::dgp::preset;
use alasso::mc::{read_summary_csv, render_table, run_experiment, write_run, BiasMode, McExperiment, RunSnapshot, TableFormat};
use clap::Args;

use crate::error::{CliError, Result};
use crate::{snapshot, EstimationArgs, RunArgs};

#[derive(Debug, Clone, Args)]
pub struct McArgs {
    /// Built-in design: setting1 ... setting5.
    #[arg(long)]
    pub preset: Option<String>,
    /// Sample size of each replication.
    #[arg(long)]
    pub n: Option<usize>,
    /// Number of replications.
    #[arg(long = "N", default_value_t = 5000)]
    pub replications: usize,
    /// Design seed; replication r uses substream r. Falls back to
    /// $ALASSO_SEED, then 1.
    #[arg(long, env = "ALASSO_SEED", default_value_t = 1)]
    pub seed: u64,
    /// Worker threads (results do not depend on this).
    #[arg(long)]
    pub workers: Option<usize>,
    #[command(flatten)]
    pub estimation: EstimationArgs,
    #[command(flatten)]
    pub run: RunArgs,
}

impl McArgs {
    pub fn experiment(&self) -> Result<McExperiment> {
        if let Some(path) = &self.run.config {
            let snap: RunSnapshot = snapshot::read(path)?;
            return Ok(snap.experiment);
        }
        self.estimation.check()?;
        let name = self
            .preset
            .as_deref()
            .ok_or_else(|| CliError::Usage("--preset is required unless --config is given".into()))?;
        let n = self
            .n
            .ok_or_else(|| CliError::Usage("--n is required unless --config is given".into()))?;
        if self.replications == 0 {
            return Err(CliError::Usage("--N must be positive".into()));
        }
        let mut exp = McExperiment::new(preset(name, n, self.seed)?, self.replications);
        exp.alpha = self.estimation.alpha;
        exp.grid_size = self.estimation.grid_size;
        exp.covariance = self.estimation.covariance();
        if self.estimation.no_bias_correction {
            exp.bias_correction = BiasMode::Off;
        }
        Ok(exp)
    }
}

fn default_dir(exp: &McExperiment) -> PathBuf {
    let name = exp.dgp.preset.as_deref().unwrap_or("custom");
    PathBuf::from(format!(
        "runs/mc-{name}-n{}-N{}-seed{}",
        exp.dgp.n, exp.replications, exp.dgp.seed
    ))
}

pub fn cmd_mc(args: &McArgs) -> Result<()> {
    let exp = args.experiment()?;
    exp.validate()?;
    let workers = crate::resolve_workers(args.workers)?;
    let summary = run_experiment(&exp, workers)?;
    if summary.failures > 0 {
        log::warn!("{} of {} replications failed and were excluded", summary.failures, summary.requested);
    }
    let dir = args.run.out.clone().unwrap_or_else(|| default_dir(&exp));
    write_run(&summary, &exp, &dir)?;
    let csv_path = dir.join("summary.csv");
    let file = std::fs::File::open(&csv_path).map_err(|e| CliError::io(&csv_path, e))?;
    let records = read_summary_csv(file)?;
    if records.len() != summary.coefficients.len() {
        return Err(CliError::Artifact {
            path: csv_path,
            message: format!("{} rows read back, expected {}", records.len(), summary.coefficients.len()),
        });
    }
    let snap: RunSnapshot = snapshot::read(&dir.join(snapshot::FILE_NAME))?;
    if snap.experiment != exp {
        return Err(CliError::Artifact {
            path: dir.join(snapshot::FILE_NAME),
            message: "snapshot does not read back to the resolved experiment".into(),
        });
    }
    println!("{}", dir.display());
    print!("{}", render_table(&summary, TableFormat::PanelA));
    println!();
    print!("{}", render_table(&summary, TableFormat::PanelB));
    Ok(())
}
