//! On-disk cache of computed spaces.
//!
//! A cache file holds an envelope whose payload is the serialized value as a
//! string, with a SHA-256 of that string. Files are written to a temporary name
//! and renamed into place, so readers never see a partial write. Any file that
//! fails to parse, carries another key, or fails its checksum is recomputed and
//! overwritten.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const CACHE_DIR_VAR: &str = "JACOBI_CACHE_DIR";
const FORMAT: u32 = 1;

#[derive(Serialize, Deserialize)]
struct Envelope {
    format: u32,
    key: String,
    checksum: String,
    payload: String,
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Where a value came from, for reporting.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Computed,
    Loaded,
    /// A file existed but was unusable.
    Recomputed,
}

#[derive(Clone, Debug)]
pub struct Cache {
    dir: Option<PathBuf>,
}

impl Cache {
    /// Does nothing on reads and writes.
    pub fn disabled() -> Self {
        Cache { dir: None }
    }

    pub fn at(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: Some(dir.into()) }
    }

    /// `dir` if given, else the directory named by `JACOBI_CACHE_DIR`, else disabled.
    pub fn from_option(dir: Option<PathBuf>) -> Self {
        match dir.or_else(|| std::env::var_os(CACHE_DIR_VAR).map(PathBuf::from)) {
            Some(d) => Cache::at(d),
            None => Cache::disabled(),
        }
    }

    /// Content hash of the library version, the value kind and its parameters.
    pub fn key(kind: &str, params: &impl Serialize) -> Result<String> {
        let params = serde_json::to_string(params)?;
        Ok(sha256_hex(format!("{}\n{kind}\n{params}", jacobi::VERSION).as_bytes()))
    }

    fn path(dir: &Path, kind: &str, key: &str) -> PathBuf {
        dir.join(format!("{kind}-{key}.json"))
    }

    fn load<T: DeserializeOwned>(path: &Path, key: &str) -> Option<T> {
        let text = fs::read_to_string(path).ok()?;
        let env: Envelope = serde_json::from_str(&text).ok()?;
        if env.format != FORMAT || env.key != key || env.checksum != sha256_hex(env.payload.as_bytes()) {
            return None;
        }
        serde_json::from_str(&env.payload).ok()
    }

    fn store<T: Serialize>(dir: &Path, path: &Path, key: &str, value: &T) -> Result<()> {
        fs::create_dir_all(dir).with_context(|| format!("creating cache directory {}", dir.display()))?;
        let payload = serde_json::to_string(value)?;
        let env = Envelope { format: FORMAT, key: key.to_string(), checksum: sha256_hex(payload.as_bytes()), payload };
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        let mut f = fs::File::create(&tmp).with_context(|| format!("writing {}", tmp.display()))?;
        f.write_all(serde_json::to_string(&env)?.as_bytes())?;
        f.sync_all()?;
        fs::rename(&tmp, path).with_context(|| format!("renaming into {}", path.display()))?;
        Ok(())
    }

    pub fn get_or_compute<T, P>(&self, kind: &str, params: &P, compute: impl FnOnce() -> Result<T>) -> Result<(T, Provenance)>
    where
        T: Serialize + DeserializeOwned,
        P: Serialize,
    {
        let Some(dir) = &self.dir else {
            return Ok((compute()?, Provenance::Computed));
        };
        let key = Self::key(kind, params)?;
        let path = Self::path(dir, kind, &key);
        let existed = path.exists();
        if let Some(v) = Self::load(&path, &key) {
            return Ok((v, Provenance::Loaded));
        }
        let value = compute()?;
        Self::store(dir, &path, &key, &value)?;
        Ok((value, if existed { Provenance::Recomputed } else { Provenance::Computed }))
    }
}
