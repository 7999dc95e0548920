//! On-disk cache for per-knot computation results.
//!
//! Entries are keyed by a hash of every input that determines the output, so
//! a warm rerun returns byte-identical payloads without recomputing.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

/// Bump when the cached payload's meaning changes.
pub const CACHE_FORMAT: u32 = 1;

/// Cache directory resolution: explicit override, then the platform cache
/// home, then a dot directory next to the invocation.
pub fn cache_dir() -> PathBuf {
    if let Some(dir) = std::env::var_os("TWISTLAB_CACHE") {
        return PathBuf::from(dir);
    }
    if let Some(dir) = std::env::var_os("XDG_CACHE_HOME") {
        return PathBuf::from(dir).join("twistlab");
    }
    if let Some(home) = std::env::var_os("HOME") {
        return PathBuf::from(home).join(".cache").join("twistlab");
    }
    PathBuf::from(".twistlab-cache")
}

/// Length-prefixed hash over the parts; prefixing keeps ("a","b") and ("ab")
/// distinct.
pub fn cache_key(parts: &[&str]) -> String {
    let mut hasher = Sha256::new();
    for part in parts {
        hasher.update((part.len() as u64).to_le_bytes());
        hasher.update(part.as_bytes());
    }
    let digest = hasher.finalize();
    let mut hex = String::with_capacity(64);
    for byte in digest {
        hex.push_str(&format!("{byte:02x}"));
    }
    hex
}

#[derive(Debug, Clone)]
pub struct CacheHandle {
    dir: PathBuf,
}

impl CacheHandle {
    pub fn new(dir: PathBuf) -> Self {
        CacheHandle { dir }
    }

    pub fn default_location() -> Self {
        CacheHandle::new(cache_dir())
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path_for(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    pub fn get(&self, key: &str) -> Option<Vec<u8>> {
        fs::read(self.path_for(key)).ok()
    }

    /// Atomic write: a reader never sees a half-written entry.
    pub fn put(&self, key: &str, bytes: &[u8]) -> io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let tmp = self.dir.join(format!("{key}.tmp.{}", std::process::id()));
        fs::write(&tmp, bytes)?;
        fs::rename(&tmp, self.path_for(key))
    }
}
