//! Output plumbing: atomic file writes and the per-run manifest.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::CliError;

/// Reproducibility record written next to a run's outputs. The digest
/// changes iff any input or resolved-config byte changes.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: Vec<String>,
    pub config_digest: String,
    pub seed: Option<u64>,
    pub version: String,
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(config_digest: String, seed: Option<u64>, outputs: &[PathBuf]) -> RunManifest {
        RunManifest {
            command: std::env::args().collect(),
            config_digest,
            seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
            outputs: outputs.iter().map(|p| p.display().to_string()).collect(),
        }
    }

    pub fn write(&self, dir: &Path) -> Result<PathBuf, CliError> {
        let path = dir.join("manifest.json");
        let json = serde_json::to_string_pretty(self).expect("manifest json");
        write_atomic(&path, json.as_bytes())?;
        Ok(path)
    }
}

pub fn digest_bytes(parts: &[&[u8]]) -> String {
    let mut hasher = Sha256::new();
    for part in parts {
        hasher.update(part);
    }
    hex::encode(hasher.finalize())
}

/// Write-to-temp-then-rename so readers never see a half-written file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    let mut tmp = tempfile::NamedTempFile::new_in(dir.unwrap_or(Path::new(".")))?;
    tmp.write_all(bytes)?;
    tmp.persist(path)
        .map_err(|e| CliError::Parse(format!("cannot persist {}: {}", path.display(), e.error)))?;
    Ok(())
}
