use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::{CliError, Result};

pub const FILE_NAME: &str = "config.snapshot";

pub fn read<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    toml::from_str(&text).map_err(|e| CliError::Snapshot {
        path: path.to_owned(),
        message: e.to_string(),
    })
}

pub fn render<T: Serialize>(value: &T) -> Result<String> {
    toml::to_string(value).map_err(|e| alasso::error::Error::Config(e.to_string()).into())
}

pub fn create_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

pub fn write(path: &Path, body: &str) -> Result<()> {
    std::fs::write(path, body).map_err(|e| CliError::io(path, e))
}

/// Writes `value` as the snapshot in `dir` and checks it parses back to the same value.
pub fn write_checked<T>(dir: &Path, value: &T) -> Result<()>
where
    T: Serialize + DeserializeOwned + PartialEq,
{
    let path = dir.join(FILE_NAME);
    write(&path, &render(value)?)?;
    let back: T = read(&path)?;
    if &back != value {
        return Err(CliError::Artifact {
            path,
            message: "snapshot does not read back to the resolved configuration".into(),
        });
    }
    Ok(())
}
