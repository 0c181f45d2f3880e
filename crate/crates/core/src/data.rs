//! Versioned data shipped with the crate: certificates, named basis lists
//! and the proof tree for V10, plus a SHA-256 manifest over all of them.

use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};
use thiserror::Error;

macro_rules! bundle {
    ($($path:literal),* $(,)?) => {
        &[$(($path, include_str!(concat!("../data/", $path)))),*]
    };
}

/// Every bundled file, keyed by its path below `data/`.
pub const BUNDLED: &[(&str, &str)] = bundle!(
    "certs/cert1.json",
    "certs/cert2.json",
    "certs/cert3.json",
    "certs/cert4.json",
    "certs/cert5.json",
    "matroids/f7_minus5.json",
    "matroids/f7_minus6.json",
    "matroids/f7_minus6_dual.json",
    "matroids/fano.json",
    "matroids/v8.json",
    "matroids/v10.json",
    "v10_tree.json",
);

pub const MANIFEST: &str = include_str!("../data/SHA256SUMS");

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DataError {
    #[error("missing data file {0}")]
    Missing(String),
    #[error("cannot read {path}: {msg}")]
    Io { path: String, msg: String },
}

/// Where relative data paths are resolved.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub enum DataSource {
    /// Files compiled into the binary.
    #[default]
    Bundled,
    Dir(PathBuf),
}

impl DataSource {
    pub fn dir(path: impl AsRef<Path>) -> Self {
        DataSource::Dir(path.as_ref().to_path_buf())
    }

    /// Reads `rel`; for the bundled source `bundled_prefix` is prepended.
    pub fn read(&self, bundled_prefix: &str, rel: &str) -> Result<String, DataError> {
        match self {
            DataSource::Bundled => {
                let key = format!("{bundled_prefix}{rel}");
                bundled(&key).map(str::to_owned).ok_or(DataError::Missing(key))
            }
            DataSource::Dir(dir) => {
                let path = dir.join(rel);
                std::fs::read_to_string(&path).map_err(|e| match e.kind() {
                    std::io::ErrorKind::NotFound => DataError::Missing(path.display().to_string()),
                    _ => DataError::Io { path: path.display().to_string(), msg: e.to_string() },
                })
            }
        }
    }
}

pub fn bundled(path: &str) -> Option<&'static str> {
    BUNDLED.iter().find(|(p, _)| *p == path).map(|(_, text)| *text)
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Result of checking one manifest line.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct ChecksumEntry {
    pub path: String,
    pub expected: String,
    pub actual: Option<String>,
}

impl ChecksumEntry {
    pub fn ok(&self) -> bool {
        self.actual.as_deref() == Some(self.expected.as_str())
    }
}

/// Checks the bundled files against the manifest. Files missing from either
/// side show up as failing entries.
pub fn verify_bundled_checksums() -> Vec<ChecksumEntry> {
    let mut out: Vec<ChecksumEntry> = MANIFEST
        .lines()
        .filter_map(|l| l.split_once("  "))
        .map(|(hash, path)| ChecksumEntry {
            path: path.to_owned(),
            expected: hash.to_owned(),
            actual: bundled(path).map(|t| sha256_hex(t.as_bytes())),
        })
        .collect();
    for (path, text) in BUNDLED {
        if !out.iter().any(|e| e.path == *path) {
            out.push(ChecksumEntry {
                path: (*path).to_owned(),
                expected: String::new(),
                actual: Some(sha256_hex(text.as_bytes())),
            });
        }
    }
    out
}
