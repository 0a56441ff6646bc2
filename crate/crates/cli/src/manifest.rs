//! Run manifests: an audit record written next to every output set.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::{Map, Value};

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Serialize)]
pub struct Manifest {
    command: String,
    args: Vec<String>,
    config: Value,
    seed: Option<u64>,
    inputs: Vec<PathBuf>,
    outputs: Vec<PathBuf>,
    version: String,
    duration_s: f64,
    #[serde(skip_serializing_if = "Map::is_empty")]
    extra: Map<String, Value>,
    #[serde(skip)]
    start: Option<Instant>,
}

pub fn version() -> String {
    format!("v{}-{}", env!("CARGO_PKG_VERSION"), env!("SCRNN_GIT_DESCRIBE"))
}

impl Manifest {
    pub fn new(command: &str, args: &[String], config: Value, seed: Option<u64>, inputs: Vec<PathBuf>, start: Instant) -> Self {
        Self {
            command: command.to_string(),
            args: args.to_vec(),
            config,
            seed,
            inputs,
            outputs: Vec::new(),
            version: version(),
            duration_s: 0.0,
            extra: Map::new(),
            start: Some(start),
        }
    }

    pub fn outputs(mut self, dir: &Path, names: &[&str]) -> Self {
        self.outputs.extend(names.iter().map(|n| dir.join(n)));
        self
    }

    pub fn outputs_if(self, dir: &Path, name: &str, cond: bool) -> Self {
        if cond {
            self.outputs(dir, &[name])
        } else {
            self
        }
    }

    pub fn extra(mut self, key: &str, value: impl Serialize) -> Self {
        self.extra
            .insert(key.to_string(), serde_json::to_value(value).unwrap_or(Value::Null));
        self
    }

    /// Writes `manifest.json` into `dir` via a temporary file and a rename.
    pub fn write(mut self, dir: &Path) -> Result<()> {
        if let Some(s) = self.start {
            self.duration_s = s.elapsed().as_secs_f64();
        }
        fs::create_dir_all(dir)?;
        let tmp = dir.join(format!(".{MANIFEST_FILE}.tmp"));
        let mut f = fs::File::create(&tmp).with_context(|| format!("creating {}", tmp.display()))?;
        f.write_all(serde_json::to_string_pretty(&self)?.as_bytes())?;
        f.sync_all()?;
        fs::rename(&tmp, dir.join(MANIFEST_FILE))?;
        Ok(())
    }
}
