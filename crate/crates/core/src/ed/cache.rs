//! On-disk cache of [`EdResult`](super::EdResult) records.
//!
//! Plain text, one record per line: `key<TAB>json`. The key encodes ring
//! size, the exact bit pattern of Δ, the sector strategy, and the boundary,
//! so lookups are bit-exact. Lines are written sorted by key, which keeps
//! the file bytes deterministic for a given set of entries.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use super::{Boundary, EdConfig, EdResult, SectorStrategy};
use crate::error::{Error, Result};

pub struct EdCache {
    path: PathBuf,
    entries: BTreeMap<String, EdResult>,
}

fn strategy_tag(s: SectorStrategy) -> &'static str {
    match s {
        SectorStrategy::Auto => "auto",
        SectorStrategy::ZeroMagnetization => "zero",
        SectorStrategy::All => "all",
    }
}

fn boundary_tag(b: Boundary) -> &'static str {
    match b {
        Boundary::Periodic => "pbc",
        Boundary::Open => "obc",
    }
}

fn key(n: usize, delta: f64, cfg: &EdConfig) -> String {
    format!(
        "n={n} delta={:016x} sector={} boundary={}",
        delta.to_bits(),
        strategy_tag(cfg.sector),
        boundary_tag(cfg.boundary)
    )
}

impl EdCache {
    /// Open a cache file, loading any existing entries. A missing file is an
    /// empty cache.
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let mut entries = BTreeMap::new();
        match fs::read_to_string(&path) {
            Ok(text) => {
                for line in text.lines() {
                    let Some((k, v)) = line.split_once('\t') else {
                        continue;
                    };
                    if let Ok(result) = serde_json::from_str::<EdResult>(v) {
                        entries.insert(k.to_string(), result);
                    }
                }
            }
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {}
            Err(e) => return Err(Error::io(path.display().to_string(), e)),
        }
        Ok(EdCache { path, entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, n: usize, delta: f64, cfg: &EdConfig) -> Option<&EdResult> {
        self.entries.get(&key(n, delta, cfg))
    }

    pub fn put(&mut self, delta: f64, cfg: &EdConfig, result: EdResult) {
        self.entries.insert(key(result.n, delta, cfg), result);
    }

    /// Write all entries back to disk, sorted by key.
    pub fn flush(&self) -> Result<()> {
        let mut file = fs::File::create(&self.path)
            .map_err(|e| Error::io(self.path.display().to_string(), e))?;
        for (k, v) in &self.entries {
            let json = serde_json::to_string(v).expect("EdResult serializes");
            writeln!(file, "{k}\t{json}").map_err(|e| Error::io(self.path.display().to_string(), e))?;
        }
        Ok(())
    }
}

/// [`super::diagonalize`] with read-through caching.
pub fn diagonalize_cached(
    delta: f64,
    cfg: &EdConfig,
    cache: &std::sync::Mutex<EdCache>,
) -> Result<Vec<EdResult>> {
    cfg.validate()?;
    let mut results: Vec<EdResult> = Vec::with_capacity(cfg.sizes.len());
    let mut missing: Vec<usize> = Vec::new();
    {
        let cache = cache.lock().unwrap();
        for &n in &cfg.sizes {
            match cache.get(n, delta, cfg) {
                Some(hit) => results.push(hit.clone()),
                None => missing.push(n),
            }
        }
    }
    if !missing.is_empty() {
        let sub = EdConfig {
            sizes: missing,
            ..cfg.clone()
        };
        let fresh = super::diagonalize(delta, &sub)?;
        let mut cache = cache.lock().unwrap();
        for r in fresh {
            cache.put(delta, cfg, r.clone());
            results.push(r);
        }
    }
    results.sort_by_key(|r| r.n);
    Ok(results)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Mutex;

    #[test]
    fn round_trips_through_disk() {
        let dir = std::env::temp_dir().join(format!("edcache-test-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("cache.tsv");
        let _ = std::fs::remove_file(&path);

        let cfg = EdConfig {
            sizes: vec![4, 6],
            ..EdConfig::default()
        };
        let cache = Mutex::new(EdCache::open(&path).unwrap());
        let first = diagonalize_cached(0.5, &cfg, &cache).unwrap();
        assert_eq!(cache.lock().unwrap().len(), 2);
        cache.lock().unwrap().flush().unwrap();

        let reloaded = Mutex::new(EdCache::open(&path).unwrap());
        assert_eq!(reloaded.lock().unwrap().len(), 2);
        let second = diagonalize_cached(0.5, &cfg, &reloaded).unwrap();
        assert_eq!(first, second);

        // A different delta misses the cache and adds entries.
        let _ = diagonalize_cached(0.25, &cfg, &reloaded).unwrap();
        assert_eq!(reloaded.lock().unwrap().len(), 4);

        std::fs::remove_dir_all(&dir).unwrap();
    }
}
