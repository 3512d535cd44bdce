use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::{PipelineConfig, Seeds};
use crate::error::{Error, Result};
use crate::stats::{GENERATOR, STREAMS};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputDigest {
    pub path: PathBuf,
    pub sha256: String,
}

/// Everything needed to reproduce a run's numbers from its inputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub config: PipelineConfig,
    pub seeds: Seeds,
    pub generator: String,
    pub streams: u64,
    pub inputs: Vec<InputDigest>,
    /// Stages run so far, in order.
    pub stages: Vec<String>,
    pub started_unix: u64,
    pub updated_unix: u64,
}

fn now() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

pub fn sha256_file(path: &Path) -> Result<String> {
    let mut file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut hasher = Sha256::new();
    std::io::copy(&mut file, &mut hasher).map_err(|e| Error::io(path, e))?;
    Ok(hasher.finalize().iter().map(|b| format!("{b:02x}")).collect())
}

impl RunManifest {
    pub fn new(config: &PipelineConfig) -> Self {
        let t = now();
        RunManifest {
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            config: config.clone(),
            seeds: config.seeds(),
            generator: GENERATOR.into(),
            streams: STREAMS,
            inputs: Vec::new(),
            stages: Vec::new(),
            started_unix: t,
            updated_unix: t,
        }
    }

    /// Records (or refreshes) the digest of an input file.
    pub fn add_input(&mut self, path: &Path) -> Result<()> {
        let sha256 = sha256_file(path)?;
        match self.inputs.iter_mut().find(|d| d.path == path) {
            Some(d) => d.sha256 = sha256,
            None => self.inputs.push(InputDigest {
                path: path.to_path_buf(),
                sha256,
            }),
        }
        Ok(())
    }

    pub fn record_stage(&mut self, stage: &str) {
        self.stages.retain(|s| s != stage);
        self.stages.push(stage.to_string());
        self.updated_unix = now();
    }

    pub fn validate(&self) -> Result<()> {
        if self.seeds != self.config.seeds() {
            return Err(Error::Config("manifest seeds do not match its configured master seed".into()));
        }
        self.config.validate()
    }

    /// Checks that every recorded input still has the recorded digest.
    pub fn verify_inputs(&self) -> Result<()> {
        for d in &self.inputs {
            let now = sha256_file(&d.path)?;
            if now != d.sha256 {
                return Err(Error::Data(format!("{} changed since the manifest was written", d.path.display())));
            }
        }
        Ok(())
    }
}

pub fn write_manifest(manifest: &RunManifest, path: &Path) -> Result<()> {
    crate::io::write_json(path, manifest)
}

/// Reads and validates a manifest. Missing or malformed fields are
/// validation errors.
pub fn read_manifest(path: &Path) -> Result<RunManifest> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let manifest: RunManifest =
        serde_json::from_str(&text).map_err(|e| Error::Config(format!("manifest {}: {e}", path.display())))?;
    manifest.validate()?;
    Ok(manifest)
}
