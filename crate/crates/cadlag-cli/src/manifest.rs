//! Run manifest: what was run, with which seed, and the digests of every
//! file the run emitted. Written after all other files so a manifest on disk
//! always describes a complete run.

use anyhow::Context;
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};

#[derive(Serialize)]
pub struct RunManifest {
    pub tool_version: &'static str,
    /// Verbatim config text, empty for subcommands that take none.
    pub config: String,
    pub seed: u64,
    /// Unix seconds at write time. Excluded from any digest, so identical
    /// runs produce byte-identical artifacts and differ only here.
    pub timestamp: u64,
    pub outputs: Vec<OutputDigest>,
}

#[derive(Serialize)]
pub struct OutputDigest {
    pub file: String,
    pub sha256: String,
}

pub struct ManifestWriter {
    dir: PathBuf,
    manifest: RunManifest,
}

impl ManifestWriter {
    pub fn new(dir: &Path, config: String, seed: u64) -> anyhow::Result<Self> {
        std::fs::create_dir_all(dir)
            .with_context(|| format!("creating output directory {}", dir.display()))?;
        let timestamp = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        Ok(ManifestWriter {
            dir: dir.to_path_buf(),
            manifest: RunManifest {
                tool_version: env!("CARGO_PKG_VERSION"),
                config,
                seed,
                timestamp,
                outputs: Vec::new(),
            },
        })
    }

    /// Write one artifact and record its digest.
    pub fn emit(&mut self, name: &str, bytes: &[u8]) -> anyhow::Result<()> {
        let path = self.dir.join(name);
        std::fs::write(&path, bytes).with_context(|| format!("writing {}", path.display()))?;
        let digest = Sha256::digest(bytes);
        self.manifest.outputs.push(OutputDigest {
            file: name.to_string(),
            sha256: format!("{digest:x}"),
        });
        Ok(())
    }

    /// Write the manifest itself; call last.
    pub fn finish(self) -> anyhow::Result<PathBuf> {
        let path = self.dir.join("manifest.json");
        let text = serde_json::to_string_pretty(&self.manifest).expect("manifest serializes");
        std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
        Ok(path)
    }
}
