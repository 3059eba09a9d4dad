use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::Result;

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

pub fn unix_now() -> f64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0.0, |d| d.as_secs_f64())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FileEntry {
    pub path: String,
    pub sha256: String,
    pub bytes: usize,
}

/// Provenance of one run: what was asked for, when, and a checksum of every
/// file and every CSV data row written.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config: String,
    pub master_seed: u64,
    pub workers: usize,
    pub started_unix_s: f64,
    pub finished_unix_s: f64,
    pub files: Vec<FileEntry>,
    pub record_sha256: Vec<String>,
}

impl RunManifest {
    pub fn new(command: &str, config: String, master_seed: u64, workers: usize, started: f64) -> Self {
        RunManifest {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            config,
            master_seed,
            workers,
            started_unix_s: started,
            finished_unix_s: started,
            files: Vec::new(),
            record_sha256: Vec::new(),
        }
    }

    /// Checksums each data row (header excluded) of a CSV text.
    pub fn add_csv_rows(&mut self, csv: &str) {
        self.record_sha256.extend(csv.lines().skip(1).map(|l| sha256_hex(l.as_bytes())));
    }
}

/// Collects output files in memory and publishes them all at once: each is
/// written to a temporary sibling and renamed into place, so a failed run
/// leaves no partial output behind.
#[derive(Debug, Default)]
pub struct OutputSet {
    files: Vec<(String, Vec<u8>)>,
}

impl OutputSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, name: impl Into<String>, contents: impl Into<Vec<u8>>) {
        self.files.push((name.into(), contents.into()));
    }

    pub fn entries(&self) -> Vec<FileEntry> {
        self.files
            .iter()
            .map(|(name, data)| FileEntry {
                path: name.clone(),
                sha256: sha256_hex(data),
                bytes: data.len(),
            })
            .collect()
    }

    /// Writes every file, the manifest last, and returns the written paths.
    pub fn publish(mut self, dir: &Path, manifest_name: &str, mut manifest: RunManifest) -> Result<Vec<PathBuf>> {
        manifest.files = self.entries();
        manifest.finished_unix_s = unix_now();
        let json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
        self.add(manifest_name, json + "\n");
        fs::create_dir_all(dir)?;
        let mut staged = Vec::new();
        for (name, data) in &self.files {
            let tmp = dir.join(format!(".{name}.tmp"));
            if let Err(e) = fs::write(&tmp, data) {
                for (t, _) in &staged {
                    let _ = fs::remove_file(t);
                }
                return Err(e.into());
            }
            staged.push((tmp, dir.join(name)));
        }
        let mut written = Vec::new();
        for (tmp, dest) in staged {
            fs::rename(&tmp, &dest)?;
            written.push(dest);
        }
        Ok(written)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_known_value() {
        assert_eq!(sha256_hex(b"abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    }

    #[test]
    fn publish_writes_manifest_with_checksums() {
        let dir = std::env::temp_dir().join(format!("cgm-out-{}", std::process::id()));
        let mut set = OutputSet::new();
        set.add("a.csv", "h\n1\n2\n");
        let mut m = RunManifest::new("simulate", "x = 1\n".into(), 7, 1, unix_now());
        m.add_csv_rows("h\n1\n2\n");
        let paths = set.publish(&dir, "manifest.json", m).unwrap();
        assert_eq!(paths.len(), 2);
        let m: RunManifest = serde_json::from_str(&fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap();
        assert_eq!(m.files[0].sha256, sha256_hex(b"h\n1\n2\n"));
        assert_eq!(m.record_sha256.len(), 2);
        assert_eq!(m.config, "x = 1\n");
        fs::remove_dir_all(dir).unwrap();
    }
}
