//! Content-addressed on-disk cache with atomic writes.

use crate::error::Result;
use serde::de::DeserializeOwned;
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

static COUNTER: AtomicU64 = AtomicU64::new(0);

pub fn content_hash(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

/// A directory of JSON entries keyed by name.
#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    /// The cache for the given key below `root`.
    pub fn new(root: &Path, key: &str) -> Cache {
        Cache { dir: root.join(content_hash(key)) }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.join(format!("{}.json", content_hash(name)))
    }

    /// The entry, or `None` if it is missing or unreadable.
    pub fn load<T: DeserializeOwned>(&self, name: &str) -> Option<T> {
        let bytes = fs::read(self.path(name)).ok()?;
        serde_json::from_slice(&bytes).ok()
    }

    /// Writes to a temporary file and renames it into place.
    pub fn store<T: Serialize>(&self, name: &str, value: &T) -> Result<()> {
        fs::create_dir_all(&self.dir)?;
        let n = COUNTER.fetch_add(1, Ordering::Relaxed);
        let tmp = self.dir.join(format!(".tmp-{}-{n}", std::process::id()));
        fs::write(&tmp, serde_json::to_vec(value)?)?;
        fs::rename(&tmp, self.path(name))?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn store_then_load() {
        let root = tempfile::tempdir().unwrap();
        let c = Cache::new(root.path(), "key");
        assert_eq!(c.load::<Vec<u32>>("a"), None);
        c.store("a", &vec![1u32, 2, 3]).unwrap();
        assert_eq!(c.load::<Vec<u32>>("a"), Some(vec![1, 2, 3]));
        assert!(Cache::new(root.path(), "other").load::<Vec<u32>>("a").is_none());
        let leftovers = fs::read_dir(c.dir()).unwrap().filter(|e| e.as_ref().unwrap().file_name().to_string_lossy().starts_with(".tmp")).count();
        assert_eq!(leftovers, 0);
    }
}
