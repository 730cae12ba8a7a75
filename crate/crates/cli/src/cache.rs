//! On-disk store for operator matrices.
//!
//! One JSON file per (space descriptor, operator label), named by the SHA-256
//! of the canonical key. The descriptor already contains the field's defining
//! polynomial, so the key pins the coordinates of the stored rows.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use weightraise_core::gfq::{FiniteField, Gf, Matrix};
use weightraise_core::msym::OperatorStore;

/// Bumping this invalidates every existing entry.
pub const CACHE_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub version: u32,
    pub key: String,
    pub p: u64,
    pub d: u32,
    /// Monic defining polynomial, constant term first.
    pub modulus: Vec<u32>,
    pub nrows: usize,
    pub ncols: usize,
    /// Entries as coefficient vectors in the field generator.
    pub rows: Vec<Vec<Vec<u32>>>,
}

impl CacheEntry {
    pub fn from_matrix(key: &str, m: &Matrix<FiniteField>) -> Self {
        let f = m.field();
        CacheEntry {
            version: CACHE_VERSION,
            key: key.to_string(),
            p: f.p(),
            d: f.degree(),
            modulus: f.modulus().to_vec(),
            nrows: m.rows(),
            ncols: m.cols(),
            rows: (0..m.rows()).map(|i| m.row(i).iter().map(|&a| f.coeffs(a)).collect()).collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<Matrix<FiniteField>, String> {
        let f = FiniteField::new(self.p, self.d).map_err(|e| e.to_string())?;
        if f.modulus() != self.modulus.as_slice() {
            return Err(format!("defining polynomial {:?} differs from {:?}", self.modulus, f.modulus()));
        }
        if self.rows.len() != self.nrows || self.rows.iter().any(|r| r.len() != self.ncols) {
            return Err(String::from("row data does not match the recorded shape"));
        }
        let rows = self
            .rows
            .iter()
            .map(|r| r.iter().map(|c| f.from_coeffs(c).map_err(|e| e.to_string())).collect::<Result<Vec<Gf>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        Matrix::from_rows(&f, self.ncols, &rows).map_err(|e| e.to_string())
    }
}

/// Why a lookup did not produce a matrix.
#[derive(Debug, PartialEq, Eq)]
pub enum Miss {
    Absent,
    Stale(u32),
    Corrupt(String),
}

#[derive(Debug)]
pub struct DiskCache {
    dir: PathBuf,
    // serializes writes within the process
    lock: Mutex<()>,
    hits: AtomicUsize,
    misses: AtomicUsize,
    warnings: Mutex<Vec<String>>,
}

pub fn key_digest(key: &str) -> String {
    let mut h = Sha256::new();
    h.update(key.as_bytes());
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

impl DiskCache {
    pub fn open(dir: impl Into<PathBuf>) -> std::io::Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(DiskCache {
            dir,
            lock: Mutex::new(()),
            hits: AtomicUsize::new(0),
            misses: AtomicUsize::new(0),
            warnings: Mutex::new(Vec::new()),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{}.json", key_digest(key)))
    }

    pub fn hits(&self) -> usize {
        self.hits.load(Ordering::Relaxed)
    }

    pub fn misses(&self) -> usize {
        self.misses.load(Ordering::Relaxed)
    }

    /// Warnings about corrupt entries seen so far.
    pub fn warnings(&self) -> Vec<String> {
        self.warnings.lock().map(|w| w.clone()).unwrap_or_default()
    }

    pub fn lookup(&self, key: &str) -> Result<Matrix<FiniteField>, Miss> {
        let path = self.path_for(key);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Err(Miss::Absent),
            Err(e) => return Err(Miss::Corrupt(e.to_string())),
        };
        // read the version alone first so a format change is stale, not corrupt
        #[derive(Deserialize)]
        struct Head {
            version: u32,
        }
        let head: Head = serde_json::from_str(&text).map_err(|e| Miss::Corrupt(e.to_string()))?;
        if head.version != CACHE_VERSION {
            return Err(Miss::Stale(head.version));
        }
        let entry: CacheEntry = serde_json::from_str(&text).map_err(|e| Miss::Corrupt(e.to_string()))?;
        if entry.key != key {
            return Err(Miss::Corrupt(String::from("key mismatch")));
        }
        entry.to_matrix().map_err(Miss::Corrupt)
    }

    pub fn write(&self, key: &str, m: &Matrix<FiniteField>) -> std::io::Result<()> {
        let entry = CacheEntry::from_matrix(key, m);
        let text = serde_json::to_string(&entry)?;
        let _guard = self.lock.lock().unwrap_or_else(|e| e.into_inner());
        let path = self.path_for(key);
        let tmp = path.with_extension("json.tmp");
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(text.as_bytes())?;
        }
        fs::rename(&tmp, &path)
    }
}

impl OperatorStore<FiniteField> for DiskCache {
    fn load(&self, key: &str) -> Option<Matrix<FiniteField>> {
        match self.lookup(key) {
            Ok(m) => {
                self.hits.fetch_add(1, Ordering::Relaxed);
                Some(m)
            }
            Err(miss) => {
                self.misses.fetch_add(1, Ordering::Relaxed);
                match miss {
                    Miss::Absent => {}
                    Miss::Stale(v) => log::debug!("ignoring cache entry of version {v} for {key}"),
                    Miss::Corrupt(why) => {
                        let msg = format!("corrupt cache entry {} ({why}); recomputing", self.path_for(key).display());
                        log::warn!("{msg}");
                        if let Ok(mut w) = self.warnings.lock() {
                            w.push(msg);
                        }
                    }
                }
                None
            }
        }
    }

    fn store(&self, key: &str, m: &Matrix<FiniteField>) {
        if let Err(e) = self.write(key, m) {
            log::warn!("could not write cache entry for {key}: {e}");
        }
    }
}
