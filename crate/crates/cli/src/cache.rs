//! Content-addressed on-disk cache.
//!
//! Each entry lives in `<dir>/<sha256 of key and schema>.entry` and starts with
//! a small header recording the schema version, the key and a checksum of the
//! payload. Entries that fail any of those checks read as misses; writers go
//! through a temporary file and a rename so readers never see partial data.

use std::fs;
use std::io::{ErrorKind, Write};
use std::path::{Path, PathBuf};

use jackfac::jack::TableStore;
use jackfac::{Error, Result};
use sha2::{Digest, Sha256};

pub const SCHEMA_VERSION: u32 = 1;

const MAGIC: &str = "jackfac-cache";

/// Environment variable that overrides `--cache-dir`.
pub const CACHE_DIR_ENV: &str = "JACKFAC_CACHE_DIR";

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
    schema: u32,
}

fn io_error(path: &Path, e: std::io::Error) -> Error {
    Error::Io(format!("{}: {e}", path.display()))
}

fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl Cache {
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self> {
        Self::with_schema(dir, SCHEMA_VERSION)
    }

    pub fn with_schema(dir: impl Into<PathBuf>, schema: u32) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(|e| io_error(&dir, e))?;
        Ok(Self { dir, schema })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, key: &str) -> PathBuf {
        let name = digest(format!("{key}\nschema={}", self.schema).as_bytes());
        self.dir.join(format!("{name}.entry"))
    }

    /// The stored payload, or `None` for a missing, stale or damaged entry.
    pub fn get(&self, key: &str) -> Result<Option<String>> {
        let path = self.path_for(key);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == ErrorKind::NotFound => return Ok(None),
            // undecodable bytes are damage, not an I/O failure
            Err(e) if e.kind() == ErrorKind::InvalidData => return Ok(None),
            Err(e) => return Err(io_error(&path, e)),
        };
        Ok(self.decode(key, &text))
    }

    fn decode(&self, key: &str, text: &str) -> Option<String> {
        let (header, payload) = text.split_once("\n\n")?;
        let mut lines = header.lines();
        if lines.next()? != MAGIC {
            return None;
        }
        let schema: u32 = lines.next()?.strip_prefix("schema=")?.parse().ok()?;
        let stored_key = lines.next()?.strip_prefix("key=")?;
        let checksum = lines.next()?.strip_prefix("sha256=")?;
        let ok =
            schema == self.schema && stored_key == key.replace('\n', " ") && checksum == digest(payload.as_bytes());
        ok.then(|| payload.to_string())
    }

    pub fn put(&self, key: &str, payload: &str) -> Result<()> {
        let path = self.path_for(key);
        let text = format!(
            "{MAGIC}\nschema={}\nkey={}\nsha256={}\n\n{payload}",
            self.schema,
            key.replace('\n', " "),
            digest(payload.as_bytes())
        );
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir).map_err(|e| io_error(&self.dir, e))?;
        tmp.write_all(text.as_bytes()).map_err(|e| io_error(tmp.path(), e))?;
        tmp.persist(&path).map_err(|e| io_error(&path, e.error))?;
        Ok(())
    }

    /// Cached value of `compute`, stored as JSON.
    pub fn get_or_compute<T, F>(&self, key: &str, compute: F) -> Result<T>
    where
        T: serde::Serialize + serde::de::DeserializeOwned,
        F: FnOnce() -> Result<T>,
    {
        if let Some(payload) = self.get(key)? {
            if let Ok(v) = serde_json::from_str(&payload) {
                return Ok(v);
            }
        }
        let v = compute()?;
        let payload = serde_json::to_string(&v).map_err(|e| Error::InvalidInput(e.to_string()))?;
        self.put(key, &payload)?;
        Ok(v)
    }
}

impl TableStore for Cache {
    fn load(&self, n: usize) -> Result<Option<String>> {
        self.get(&format!("jack-table size={n}"))
    }

    fn save(&self, n: usize, text: &str) -> Result<()> {
        self.put(&format!("jack-table size={n}"), text)
    }
}
