//! On-disk result cache. Each entry is one JSON file holding its key, the
//! payload as a string and the payload's SHA-256. Readers validate both and
//! never lock; writers hold a lock file and publish by rename.

use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheKey {
    pub m: u32,
    pub p: u32,
    pub n: u32,
    pub kind: String,
    pub version: u32,
}

impl CacheKey {
    pub fn new(m: u32, p: u32, n: u32, kind: &str) -> Self {
        CacheKey { m, p, n, kind: kind.into(), version: supercoinv::ENGINE_VERSION }
    }

    fn file_name(&self) -> String {
        format!("{}-{}-{}-{}.json", self.kind, self.m, self.p, self.n)
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct CacheEntry {
    key: CacheKey,
    payload: String,
    checksum: String,
}

/// What a lookup found.
#[derive(Debug, PartialEq, Eq)]
pub enum Lookup<T> {
    Hit(T),
    Miss,
    /// Present but unusable: wrong version, bad checksum or unparsable.
    Stale(String),
}

pub fn checksum(payload: &str) -> String {
    hex::encode(Sha256::digest(payload.as_bytes()))
}

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into() }
    }

    /// `$SUPERCOINV_CACHE`, else the platform cache directory.
    pub fn default_dir() -> Option<PathBuf> {
        std::env::var_os("SUPERCOINV_CACHE")
            .map(PathBuf::from)
            .or_else(|| dirs::cache_dir().map(|d| d.join("supercoinv")))
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, key: &CacheKey) -> PathBuf {
        self.dir.join(key.file_name())
    }

    pub fn get<T: DeserializeOwned>(&self, key: &CacheKey) -> Lookup<T> {
        let Ok(text) = fs::read_to_string(self.path(key)) else { return Lookup::Miss };
        let entry: CacheEntry = match serde_json::from_str(&text) {
            Ok(e) => e,
            Err(e) => return Lookup::Stale(format!("unreadable entry: {e}")),
        };
        if entry.key != *key {
            return Lookup::Stale(format!("key mismatch (stored version {})", entry.key.version));
        }
        if checksum(&entry.payload) != entry.checksum {
            return Lookup::Stale("checksum mismatch".into());
        }
        match serde_json::from_str(&entry.payload) {
            Ok(v) => Lookup::Hit(v),
            Err(e) => Lookup::Stale(format!("unreadable payload: {e}")),
        }
    }

    /// Stores `value`. Returns `Ok(false)` without writing when another
    /// process holds the lock.
    pub fn put<T: Serialize>(&self, key: &CacheKey, value: &T) -> std::io::Result<bool> {
        fs::create_dir_all(&self.dir)?;
        let lock = self.dir.join(".lock");
        match OpenOptions::new().write(true).create_new(true).open(&lock) {
            Ok(_) => {}
            Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => return Ok(false),
            Err(e) => return Err(e),
        }
        let result = self.write_entry(key, value);
        let _ = fs::remove_file(&lock);
        result.map(|_| true)
    }

    fn write_entry<T: Serialize>(&self, key: &CacheKey, value: &T) -> std::io::Result<()> {
        let payload = serde_json::to_string(value).map_err(std::io::Error::other)?;
        let entry = CacheEntry { key: key.clone(), checksum: checksum(&payload), payload };
        let text = serde_json::to_string(&entry).map_err(std::io::Error::other)?;
        let tmp = self.dir.join(format!(".{}.{}.tmp", key.file_name(), std::process::id()));
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(text.as_bytes())?;
            f.sync_all()?;
        }
        fs::rename(&tmp, self.path(key))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        let key = CacheKey::new(1, 1, 3, "sh-table");
        assert_eq!(cache.get::<Vec<u32>>(&key), Lookup::Miss);
        assert!(cache.put(&key, &vec![1u32, 2, 3]).unwrap());
        assert_eq!(cache.get::<Vec<u32>>(&key), Lookup::Hit(vec![1, 2, 3]));

        let path = cache.path(&key);
        let text = fs::read_to_string(&path).unwrap().replace("[1,2,3]", "[1,2,4]");
        fs::write(&path, text).unwrap();
        assert!(matches!(cache.get::<Vec<u32>>(&key), Lookup::Stale(_)));

        let old = CacheKey { version: 0, ..key.clone() };
        cache.put(&old, &vec![9u32]).unwrap();
        assert!(matches!(cache.get::<Vec<u32>>(&key), Lookup::Stale(_)));
    }

    #[test]
    fn held_lock_skips_write() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        fs::write(dir.path().join(".lock"), "").unwrap();
        let key = CacheKey::new(2, 2, 2, "sh-table");
        assert!(!cache.put(&key, &1u32).unwrap());
        assert_eq!(cache.get::<u32>(&key), Lookup::Miss);
    }
}
