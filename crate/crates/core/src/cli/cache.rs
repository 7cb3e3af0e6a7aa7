use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

/// Content-addressed store of command outputs.
#[derive(Debug, Clone)]
pub struct Cache {
    dir: PathBuf,
}

/// Hex SHA-256 of the crate version, the entry kind and the JSON form of `payload`.
pub fn cache_key(kind: &str, payload: &impl Serialize) -> String {
    let mut h = Sha256::new();
    h.update(env!("CARGO_PKG_VERSION").as_bytes());
    h.update([0]);
    h.update(kind.as_bytes());
    h.update([0]);
    h.update(serde_json::to_vec(payload).expect("cache payload serializes"));
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into() }
    }

    /// `--cache-dir`, else `CYCALC_CACHE`, else a directory under the system temp dir.
    pub fn resolve(flag: Option<&Path>) -> Self {
        if let Some(p) = flag {
            return Cache::new(p);
        }
        match std::env::var_os("CYCALC_CACHE") {
            Some(p) if !p.is_empty() => Cache::new(p),
            _ => Cache::new(std::env::temp_dir().join("cycalc-cache")),
        }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    pub fn get(&self, key: &str) -> Option<String> {
        fs::read_to_string(self.path(key)).ok()
    }

    /// Write through a temporary file in the same directory, then rename into place.
    pub fn put(&self, key: &str, contents: &str) -> io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let tmp = self.dir.join(format!(".{key}.{}.tmp", std::process::id()));
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(contents.as_bytes())?;
            f.sync_all()?;
        }
        fs::rename(&tmp, self.path(key)).inspect_err(|_| {
            let _ = fs::remove_file(&tmp);
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_key_stability() {
        let dir = tempfile::tempdir().unwrap();
        let c = Cache::new(dir.path());
        let k = cache_key("ifun", &("no7", 3));
        assert_eq!(k, cache_key("ifun", &("no7", 3)));
        assert_ne!(k, cache_key("ifun", &("no7", 4)));
        assert_ne!(k, cache_key("pf", &("no7", 3)));
        assert_eq!(c.get(&k), None);
        c.put(&k, "{\"a\":1}\n").unwrap();
        assert_eq!(c.get(&k).as_deref(), Some("{\"a\":1}\n"));
        let leftovers: Vec<_> = fs::read_dir(dir.path())
            .unwrap()
            .filter_map(|e| e.ok())
            .filter(|e| e.file_name().to_string_lossy().ends_with(".tmp"))
            .collect();
        assert!(leftovers.is_empty());
    }
}
