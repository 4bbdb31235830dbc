use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::{Error, Result};

/// Record of one command invocation, written next to its primary output as
/// `<output>.manifest.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub tool_version: String,
    pub config: BTreeMap<String, Value>,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub seed: Option<u64>,
    pub duration_ms: u128,
    /// Seconds since the Unix epoch at start.
    pub started_at: u64,
}

pub struct ManifestBuilder {
    command: &'static str,
    config: BTreeMap<String, Value>,
    inputs: Vec<String>,
    outputs: Vec<String>,
    seed: Option<u64>,
    started: Instant,
    started_at: u64,
}

impl ManifestBuilder {
    pub fn start(command: &'static str) -> Self {
        Self {
            command,
            config: BTreeMap::new(),
            inputs: Vec::new(),
            outputs: Vec::new(),
            seed: None,
            started: Instant::now(),
            started_at: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        }
    }

    pub fn config(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        let v = serde_json::to_value(value).unwrap_or(Value::Null);
        self.config.insert(key.to_string(), v);
        self
    }

    pub fn input(&mut self, path: &Path) -> &mut Self {
        self.inputs.push(path.display().to_string());
        self
    }

    pub fn output(&mut self, path: &Path) -> &mut Self {
        self.outputs.push(path.display().to_string());
        self
    }

    pub fn seed(&mut self, seed: u64) -> &mut Self {
        self.seed = Some(seed);
        self
    }

    /// Writes the manifest beside `primary` and returns its path.
    pub fn finish(&self, primary: &Path) -> Result<PathBuf> {
        let manifest = RunManifest {
            command: self.command.to_string(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            config: self.config.clone(),
            inputs: self.inputs.clone(),
            outputs: self.outputs.clone(),
            seed: self.seed,
            duration_ms: self.started.elapsed().as_millis(),
            started_at: self.started_at,
        };
        let path = manifest_path(primary);
        let mut text = serde_json::to_string_pretty(&manifest)?;
        text.push('\n');
        std::fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
        Ok(path)
    }
}

pub fn manifest_path(output: &Path) -> PathBuf {
    let mut name = output.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}

pub fn read_manifest(path: &Path) -> Result<RunManifest> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(serde_json::from_str(&text)?)
}
