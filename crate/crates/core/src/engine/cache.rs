use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};

use super::{Coeff, EngineError, VERSION};
use crate::linalg::AbelianGroup;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupJson {
    pub i: usize,
    pub rank: usize,
    pub torsion: Vec<u64>,
}

/// One cached row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub n: usize,
    pub d: usize,
    pub coeff: String,
    pub fingerprint: String,
    pub groups: Vec<GroupJson>,
    pub version: String,
}

impl CacheEntry {
    pub fn new(
        n: usize,
        d: usize,
        coeff: Coeff,
        fingerprint: &str,
        groups: &[AbelianGroup],
    ) -> Self {
        CacheEntry {
            n,
            d,
            coeff: coeff.to_string(),
            fingerprint: fingerprint.to_string(),
            groups: groups
                .iter()
                .enumerate()
                .map(|(i, g)| GroupJson {
                    i,
                    rank: g.rank,
                    torsion: g.torsion.clone(),
                })
                .collect(),
            version: VERSION.to_string(),
        }
    }

    pub fn groups(&self) -> Vec<AbelianGroup> {
        self.groups
            .iter()
            .map(|g| AbelianGroup::new(g.rank, g.torsion.iter().copied()))
            .collect()
    }
}

/// Directory of JSON files `h_{family}_{n}_{d}_{coeff}.json`.
#[derive(Debug, Clone)]
pub struct Cache {
    dir: PathBuf,
}

static TEMP_COUNTER: AtomicU64 = AtomicU64::new(0);

fn io_err(path: &Path, e: impl std::fmt::Display) -> EngineError {
    EngineError::Cache(format!("{}: {e}", path.display()))
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Result<Self, EngineError> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(|e| io_err(&dir, e))?;
        Ok(Cache { dir })
    }

    /// Uses `SUPERBRAID_CACHE` when it is set.
    pub fn from_env() -> Result<Option<Self>, EngineError> {
        match std::env::var_os("SUPERBRAID_CACHE") {
            Some(dir) if !dir.is_empty() => Ok(Some(Self::new(PathBuf::from(dir))?)),
            _ => Ok(None),
        }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, family: &str, n: usize, d: usize, coeff: Coeff) -> PathBuf {
        self.dir
            .join(format!("h_{family}_{n}_{d}_{}.json", coeff.file_tag()))
    }

    fn read(&self, path: &Path) -> Result<Option<CacheEntry>, EngineError> {
        match fs::read_to_string(path) {
            Ok(text) => serde_json::from_str(&text)
                .map(Some)
                .map_err(|e| io_err(path, e)),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(io_err(path, e)),
        }
    }

    /// Stored groups, if present. A file written under another fingerprint
    /// is a conflict.
    pub fn load(
        &self,
        family: &str,
        n: usize,
        d: usize,
        coeff: Coeff,
        fingerprint: &str,
    ) -> Result<Option<Vec<AbelianGroup>>, EngineError> {
        let path = self.path(family, n, d, coeff);
        let Some(entry) = self.read(&path)? else {
            return Ok(None);
        };
        if entry.fingerprint != fingerprint {
            return Err(EngineError::CacheConflict {
                path: path.display().to_string(),
                expected: fingerprint.to_string(),
                found: entry.fingerprint,
            });
        }
        Ok(Some(entry.groups()))
    }

    /// Writes through a temporary file and a rename, so readers never see a
    /// partial file.
    pub fn store(
        &self,
        family: &str,
        n: usize,
        d: usize,
        coeff: Coeff,
        fingerprint: &str,
        groups: &[AbelianGroup],
    ) -> Result<(), EngineError> {
        let path = self.path(family, n, d, coeff);
        if let Some(existing) = self.read(&path)? {
            if existing.fingerprint != fingerprint {
                return Err(EngineError::CacheConflict {
                    path: path.display().to_string(),
                    expected: fingerprint.to_string(),
                    found: existing.fingerprint,
                });
            }
        }
        let entry = CacheEntry::new(n, d, coeff, fingerprint, groups);
        let text = serde_json::to_string_pretty(&entry).map_err(|e| io_err(&path, e))?;
        let tmp = self.dir.join(format!(
            ".tmp-{}-{}-{}",
            std::process::id(),
            TEMP_COUNTER.fetch_add(1, Ordering::Relaxed),
            path.file_name().and_then(|s| s.to_str()).unwrap_or("entry")
        ));
        fs::write(&tmp, text + "\n").map_err(|e| io_err(&tmp, e))?;
        fs::rename(&tmp, &path).map_err(|e| io_err(&path, e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_conflict() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path()).unwrap();
        let groups = vec![AbelianGroup::zero(), AbelianGroup::new(1, [2, 6])];
        assert_eq!(cache.load("A", 4, 6, Coeff::Integers, "fp").unwrap(), None);
        cache
            .store("A", 4, 6, Coeff::Integers, "fp", &groups)
            .unwrap();
        assert_eq!(
            cache.load("A", 4, 6, Coeff::Integers, "fp").unwrap(),
            Some(groups.clone())
        );
        assert!(cache
            .path("A", 4, 6, Coeff::Integers)
            .ends_with("h_A_4_6_z.json"));
        // same fingerprint: last writer wins
        cache
            .store("A", 4, 6, Coeff::Integers, "fp", &groups)
            .unwrap();
        assert!(matches!(
            cache.store("A", 4, 6, Coeff::Integers, "other", &groups),
            Err(EngineError::CacheConflict { .. })
        ));
        assert!(matches!(
            cache.load("A", 4, 6, Coeff::Integers, "other"),
            Err(EngineError::CacheConflict { .. })
        ));
        let text = std::fs::read_to_string(cache.path("A", 4, 6, Coeff::Integers)).unwrap();
        let json: serde_json::Value = serde_json::from_str(&text).unwrap();
        for key in ["n", "d", "coeff", "fingerprint", "groups", "version"] {
            assert!(json.get(key).is_some(), "{key}");
        }
        assert_eq!(json["groups"][1]["torsion"], serde_json::json!([2, 6]));
    }
}
