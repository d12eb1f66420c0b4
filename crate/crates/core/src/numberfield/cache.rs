//! On-disk cache of splitting data, keyed by the polynomial's content hash.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::LocalSplitting;
use crate::error::{Error, Result};

pub const CACHE_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct Record {
    p: u64,
    degrees: Vec<usize>,
    skipped: bool,
}

#[derive(Debug, Serialize, Deserialize)]
struct CacheFile {
    version: u32,
    poly_hash: String,
    records: Vec<Record>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplittingCache {
    poly_hash: String,
    records: BTreeMap<u64, LocalSplitting>,
    dirty: bool,
}

impl SplittingCache {
    pub fn new(poly_hash: &str) -> Self {
        SplittingCache { poly_hash: poly_hash.to_string(), records: BTreeMap::new(), dirty: false }
    }

    /// Loads `path` if it exists, otherwise starts empty. A file written for
    /// another polynomial is an error.
    pub fn load_or_new(path: &Path, poly_hash: &str) -> Result<Self> {
        if !path.exists() {
            return Ok(Self::new(poly_hash));
        }
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Cache(format!("{}: {e}", path.display())))?;
        let file: CacheFile = serde_json::from_str(&text)
            .map_err(|e| Error::Cache(format!("{}: {e}", path.display())))?;
        if file.version != CACHE_VERSION {
            return Err(Error::Cache(format!(
                "{}: unsupported cache version {}",
                path.display(),
                file.version
            )));
        }
        if file.poly_hash != poly_hash {
            return Err(Error::Cache(format!(
                "{}: cache belongs to polynomial {}, not {poly_hash}",
                path.display(),
                file.poly_hash
            )));
        }
        let records = file
            .records
            .into_iter()
            .map(|r| (r.p, LocalSplitting { p: r.p, residue_degrees: r.degrees, skipped: r.skipped }))
            .collect();
        Ok(SplittingCache { poly_hash: poly_hash.to_string(), records, dirty: false })
    }

    pub fn get(&self, p: u64) -> Option<&LocalSplitting> {
        self.records.get(&p)
    }

    pub fn insert(&mut self, s: LocalSplitting) {
        if self.records.get(&s.p) != Some(&s) {
            self.records.insert(s.p, s);
            self.dirty = true;
        }
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn is_dirty(&self) -> bool {
        self.dirty
    }

    pub fn save(&mut self, path: &Path) -> Result<()> {
        let file = CacheFile {
            version: CACHE_VERSION,
            poly_hash: self.poly_hash.clone(),
            records: self
                .records
                .values()
                .map(|s| Record { p: s.p, degrees: s.residue_degrees.clone(), skipped: s.skipped })
                .collect(),
        };
        let text = serde_json::to_string(&file).map_err(|e| Error::Cache(e.to_string()))?;
        fs::write(path, text).map_err(|e| Error::Cache(format!("{}: {e}", path.display())))?;
        self.dirty = false;
        Ok(())
    }
}
