//! On-disk cache of computed cones.
//!
//! Entries are keyed by `(g, n, mode)` and the content hash of the freshly
//! generated inequality description, so any change to strata enumeration or
//! functionals makes old entries unreachable. A loaded payload is accepted
//! only if every ray satisfies every inequality of the fresh description.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::cone::{ConeH, ConeV, MatrixFile};
use crate::error::Result;

pub const CACHE_VERSION: u32 = 1;
pub const CACHE_ENV: &str = "FABERCONE_CACHE";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub version: u32,
    pub g: u32,
    pub n: u32,
    pub mode: String,
    pub input_hash: String,
    pub payload: MatrixFile,
}

#[derive(Clone, Debug)]
pub struct Cache {
    pub dir: PathBuf,
}

impl Cache {
    /// The directory named by `FABERCONE_CACHE`, else a directory under the
    /// system temporary directory.
    pub fn from_env() -> Self {
        let dir = std::env::var_os(CACHE_ENV)
            .map(PathBuf::from)
            .unwrap_or_else(|| std::env::temp_dir().join("fabercone-cache"));
        Cache { dir }
    }

    pub fn at(dir: impl AsRef<Path>) -> Self {
        Cache { dir: dir.as_ref().to_path_buf() }
    }

    fn path(&self, g: u32, n: u32, mode: &str, hash: &str) -> PathBuf {
        self.dir.join(format!("{mode}-g{g}-n{n}-{}.json", &hash[..16.min(hash.len())]))
    }

    /// Cached rays of `h`, if present and consistent with `h`. Inconsistent
    /// or unreadable entries are removed.
    pub fn load(&self, g: u32, n: u32, mode: &str, h: &ConeH) -> Option<ConeV> {
        let hash = h.content_hash();
        let path = self.path(g, n, mode, &hash);
        let text = std::fs::read_to_string(&path).ok()?;
        let valid = serde_json::from_str::<CacheEntry>(&text).ok().and_then(|e| {
            let matches = e.version == CACHE_VERSION && e.g == g && e.n == n && e.mode == mode && e.input_hash == hash;
            let cone = e.payload.into_v().ok()?;
            (matches && cone.satisfies(h)).then_some(cone)
        });
        if valid.is_none() {
            let _ = std::fs::remove_file(&path);
        }
        valid
    }

    pub fn store(&self, g: u32, n: u32, mode: &str, h: &ConeH, v: &ConeV) -> Result<PathBuf> {
        std::fs::create_dir_all(&self.dir)?;
        let hash = h.content_hash();
        let entry = CacheEntry { version: CACHE_VERSION, g, n, mode: mode.to_string(), input_hash: hash.clone(), payload: v.to_file() };
        let path = self.path(g, n, mode, &hash);
        let tmp = path.with_extension("tmp");
        std::fs::write(&tmp, serde_json::to_vec(&entry)?)?;
        std::fs::rename(&tmp, &path)?;
        Ok(path)
    }
}
