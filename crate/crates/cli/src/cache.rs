//! Content-addressed result cache.
//!
//! Entries are keyed by a hash of the canonical request (geometry content
//! hash, class, indices, range, seed, engine version) and store the exact
//! output bytes together with their own hash; corruption is detected on
//! read and triggers recomputation, never silent reuse.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::fs;
use std::path::{Path, PathBuf};

pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn content_hash(text: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(text.as_bytes());
    hex_string(&hasher.finalize())
}

fn hex_string(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Serialize, Deserialize)]
struct CacheEntry {
    key: String,
    payload_hash: String,
    engine_version: String,
    created_unix: u64,
    payload: String,
}

pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: &Path) -> std::io::Result<Cache> {
        fs::create_dir_all(dir)?;
        Ok(Cache {
            dir: dir.to_path_buf(),
        })
    }

    fn path_for(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    /// The stored payload, if present and intact.
    pub fn lookup(&self, key: &str) -> Option<String> {
        let path = self.path_for(key);
        let text = fs::read_to_string(path).ok()?;
        let entry: CacheEntry = serde_json::from_str(&text).ok()?;
        if entry.key != key
            || entry.engine_version != ENGINE_VERSION
            || content_hash(&entry.payload) != entry.payload_hash
        {
            return None;
        }
        Some(entry.payload)
    }

    pub fn store(&self, key: &str, payload: &str) -> std::io::Result<()> {
        let entry = CacheEntry {
            key: key.to_string(),
            payload_hash: content_hash(payload),
            engine_version: ENGINE_VERSION.to_string(),
            created_unix: std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            payload: payload.to_string(),
        };
        let text = serde_json::to_string(&entry).expect("cache entry serializes");
        fs::write(self.path_for(key), text)
    }
}
