//! Run manifests: every emitted file, checksummed.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

#[derive(Debug, thiserror::Error)]
pub enum ManifestError {
    #[error("i/o failure on {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("manifest missing from {dir}")]
    Missing { dir: String },
    #[error("manifest is not valid JSON: {0}")]
    Corrupt(#[from] serde_json::Error),
    #[error("checksum mismatch for {path}")]
    ChecksumMismatch { path: String },
    #[error("file {path} exists in the output directory but is not listed")]
    Unlisted { path: String },
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct FileRecord {
    pub path: String,
    pub bytes: u64,
    pub sha256: String,
}

/// Snapshot of one command run: configuration echo, artifact version,
/// timestamps and the checksummed file list.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub artifact_version: String,
    pub created_unix_ms: u128,
    pub config: BTreeMap<String, String>,
    pub files: Vec<FileRecord>,
}

/// Collects output files for a run directory and finalizes the manifest.
pub struct ManifestWriter {
    dir: PathBuf,
    manifest: RunManifest,
}

impl ManifestWriter {
    pub fn new(
        dir: &Path,
        command: &str,
        config: BTreeMap<String, String>,
    ) -> Result<Self, ManifestError> {
        std::fs::create_dir_all(dir).map_err(|source| ManifestError::Io {
            path: dir.display().to_string(),
            source,
        })?;
        let created_unix_ms = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_millis())
            .unwrap_or(0);
        Ok(ManifestWriter {
            dir: dir.to_path_buf(),
            manifest: RunManifest {
                command: command.to_string(),
                artifact_version: env!("CARGO_PKG_VERSION").to_string(),
                created_unix_ms,
                config,
                files: Vec::new(),
            },
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// Writes a file into the run directory and records its checksum.
    pub fn write_file(&mut self, name: &str, contents: &str) -> Result<PathBuf, ManifestError> {
        let path = self.dir.join(name);
        std::fs::write(&path, contents).map_err(|source| ManifestError::Io {
            path: path.display().to_string(),
            source,
        })?;
        self.manifest.files.push(FileRecord {
            path: name.to_string(),
            bytes: contents.len() as u64,
            sha256: sha256_hex(contents.as_bytes()),
        });
        Ok(path)
    }

    /// Writes `manifest.json` listing everything emitted so far.
    pub fn finalize(mut self) -> Result<RunManifest, ManifestError> {
        self.manifest.files.sort_by(|a, b| a.path.cmp(&b.path));
        let text = serde_json::to_string_pretty(&self.manifest).expect("manifest serializes");
        let path = self.dir.join("manifest.json");
        std::fs::write(&path, text).map_err(|source| ManifestError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Ok(self.manifest)
    }
}

/// Validates a finished run directory: the manifest parses, every listed
/// checksum matches, and every file present is listed.
pub fn verify_manifest(dir: &Path) -> Result<RunManifest, ManifestError> {
    let manifest_path = dir.join("manifest.json");
    if !manifest_path.exists() {
        return Err(ManifestError::Missing {
            dir: dir.display().to_string(),
        });
    }
    let text = std::fs::read_to_string(&manifest_path).map_err(|source| ManifestError::Io {
        path: manifest_path.display().to_string(),
        source,
    })?;
    let manifest: RunManifest = serde_json::from_str(&text)?;

    for record in &manifest.files {
        let path = dir.join(&record.path);
        let bytes = std::fs::read(&path).map_err(|source| ManifestError::Io {
            path: path.display().to_string(),
            source,
        })?;
        if sha256_hex(&bytes) != record.sha256 || bytes.len() as u64 != record.bytes {
            return Err(ManifestError::ChecksumMismatch {
                path: record.path.clone(),
            });
        }
    }

    let listed: std::collections::BTreeSet<&str> =
        manifest.files.iter().map(|f| f.path.as_str()).collect();
    for entry in std::fs::read_dir(dir).map_err(|source| ManifestError::Io {
        path: dir.display().to_string(),
        source,
    })? {
        let entry = entry.map_err(|source| ManifestError::Io {
            path: dir.display().to_string(),
            source,
        })?;
        let name = entry.file_name().to_string_lossy().to_string();
        if name != "manifest.json" && !listed.contains(name.as_str()) {
            return Err(ManifestError::Unlisted { path: name });
        }
    }
    Ok(manifest)
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let mut out = String::with_capacity(64);
    for byte in digest {
        out.push_str(&format!("{byte:02x}"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn writes_and_verifies() {
        let dir = tempfile::tempdir().unwrap();
        let mut writer =
            ManifestWriter::new(dir.path(), "demo", BTreeMap::new()).unwrap();
        writer.write_file("a.csv", "x,y\n1,2\n").unwrap();
        writer.write_file("b.json", "{}").unwrap();
        writer.finalize().unwrap();

        let manifest = verify_manifest(dir.path()).unwrap();
        assert_eq!(manifest.files.len(), 2);
        assert_eq!(manifest.command, "demo");
    }

    #[test]
    fn detects_corruption_and_unlisted_files() {
        let dir = tempfile::tempdir().unwrap();
        let mut writer =
            ManifestWriter::new(dir.path(), "demo", BTreeMap::new()).unwrap();
        writer.write_file("a.csv", "data").unwrap();
        writer.finalize().unwrap();

        std::fs::write(dir.path().join("a.csv"), "tampered").unwrap();
        assert!(matches!(
            verify_manifest(dir.path()),
            Err(ManifestError::ChecksumMismatch { .. })
        ));

        std::fs::write(dir.path().join("a.csv"), "data").unwrap();
        std::fs::write(dir.path().join("stray.txt"), "oops").unwrap();
        assert!(matches!(
            verify_manifest(dir.path()),
            Err(ManifestError::Unlisted { .. })
        ));
    }

    #[test]
    fn sha256_known_answer() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }
}
