//! `simulate`: one sample from a design, written as CSV.

use std::path::PathBuf;

use alasso::dataset::write_csv;
use alasso::dgp::{preset, simulate_raw, DgpConfig};
use clap::Args;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::snapshot;

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    /// Built-in design: setting1 ... setting5.
    #[arg(long)]
    pub preset: Option<String>,
    /// Effective sample size; the file has `n + max(p1, 1)` rows.
    #[arg(long)]
    pub n: Option<usize>,
    /// Falls back to $ALASSO_SEED, then 1.
    #[arg(long, env = "ALASSO_SEED", default_value_t = 1)]
    pub seed: u64,
    /// Substream of the seed (replication index).
    #[arg(long, default_value_t = 0)]
    pub stream: u64,
    /// Output CSV; the snapshot is written next to it with a `.snapshot` suffix.
    #[arg(long, default_value = "simulated.csv")]
    pub out: PathBuf,
    /// Re-run from an earlier snapshot.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulateConfig {
    pub tool_version: String,
    pub rng: String,
    pub stream: u64,
    pub dgp: DgpConfig,
}

pub fn cmd_simulate(args: &SimulateArgs) -> Result<()> {
    let cfg = match &args.config {
        Some(path) => snapshot::read(path)?,
        None => {
            let name = args
                .preset
                .as_deref()
                .ok_or_else(|| CliError::Usage("--preset is required unless --config is given".into()))?;
            let n = args
                .n
                .ok_or_else(|| CliError::Usage("--n is required unless --config is given".into()))?;
            SimulateConfig {
                tool_version: env!("CARGO_PKG_VERSION").to_owned(),
                rng: alasso::rng::RNG_IDENTITY.to_owned(),
                stream: args.stream,
                dgp: preset(name, n, args.seed)?,
            }
        }
    };
    cfg.dgp.validate()?;
    let table = simulate_raw(&cfg.dgp, cfg.stream)?;
    if let Some(parent) = args.out.parent().filter(|p| !p.as_os_str().is_empty()) {
        snapshot::create_dir(parent)?;
    }
    write_csv(&table, &args.out)?;
    let snap_path = args.out.with_extension("snapshot");
    snapshot::write(&snap_path, &snapshot::render(&cfg)?)?;
    let back: SimulateConfig = snapshot::read(&snap_path)?;
    if back != cfg {
        return Err(CliError::Artifact {
            path: snap_path,
            message: "snapshot does not read back to the resolved configuration".into(),
        });
    }
    let m = &cfg.dgp.model;
    println!(
        "{} rows; fit with --response {} --p1 {} --p2 {} --p3 {}",
        table.len(),
        table.response_name,
        m.p1,
        m.p2,
        m.p3
    );
    Ok(())
}
