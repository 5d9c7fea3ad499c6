//! On-disk cache of enumeration documents, keyed by `(d, A, q_max)`.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use toric_mld::{CoefficientSet, Error, Result};

pub const CACHE_ENV: &str = "TORIC_MLD_CACHE";

pub struct ResultCache {
    dir: PathBuf,
}

fn io_error(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::Parse(format!("cache {}: {e}", path.display()))
}

impl ResultCache {
    /// The cache named by `TORIC_MLD_CACHE`, or `None` when unset or empty.
    pub fn from_env() -> Option<Self> {
        let dir = std::env::var_os(CACHE_ENV)?;
        if dir.is_empty() {
            return None;
        }
        Some(ResultCache { dir: dir.into() })
    }

    pub fn entry_path(&self, d: usize, set: &CoefficientSet, q_max: u64) -> PathBuf {
        let key = set.to_string().replace('/', "_");
        self.dir
            .join(format!("enumerate_d{d}_A{key}_q{q_max}.json"))
    }

    pub fn load(&self, d: usize, set: &CoefficientSet, q_max: u64) -> Result<Option<String>> {
        let path = self.entry_path(d, set, q_max);
        match fs::read_to_string(&path) {
            Ok(text) => Ok(Some(text)),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(io_error(&path, e)),
        }
    }

    /// Writes to a temporary file in the cache directory, then renames it into place.
    pub fn store(&self, d: usize, set: &CoefficientSet, q_max: u64, text: &str) -> Result<()> {
        fs::create_dir_all(&self.dir).map_err(|e| io_error(&self.dir, e))?;
        let path = self.entry_path(d, set, q_max);
        let mut tmp =
            tempfile::NamedTempFile::new_in(&self.dir).map_err(|e| io_error(&self.dir, e))?;
        tmp.write_all(text.as_bytes())
            .map_err(|e| io_error(&path, e))?;
        tmp.persist(&path).map_err(|e| io_error(&path, e.error))?;
        Ok(())
    }
}
