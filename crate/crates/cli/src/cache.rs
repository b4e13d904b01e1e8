//! Content-addressed result cache: one file per request, keyed by the SHA-256
//! of the request's canonical JSON.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde_json::Value;
use sha2::{Digest, Sha256};

/// Bumped whenever the stored output format changes.
const FORMAT_VERSION: u32 = 1;

pub struct Cache {
    dir: Option<PathBuf>,
}

impl Cache {
    pub fn new(dir: &Path, enabled: bool) -> Self {
        Cache { dir: enabled.then(|| dir.to_path_buf()) }
    }

    /// Key of `request`; `serde_json` maps are sorted, so the text is canonical.
    pub fn key(request: &Value) -> String {
        let mut tagged = request.clone();
        if let Value::Object(map) = &mut tagged {
            map.insert("format".into(), FORMAT_VERSION.into());
        }
        hex::encode(Sha256::digest(tagged.to_string().as_bytes()))
    }

    /// Returns the stored output for `request`, or computes, stores and
    /// returns it. Reports hits and misses on stderr.
    pub fn get_or_compute<F>(&self, request: &Value, compute: F) -> Result<String>
    where
        F: FnOnce() -> Result<String>,
    {
        let Some(dir) = &self.dir else {
            return compute();
        };
        let path = dir.join(format!("{}.json", Self::key(request)));
        if let Ok(text) = fs::read_to_string(&path) {
            eprintln!("cached: true ({})", path.display());
            return Ok(text);
        }
        let text = compute()?;
        fs::create_dir_all(dir).with_context(|| format!("creating cache directory {}", dir.display()))?;
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, &text).with_context(|| format!("writing {}", tmp.display()))?;
        fs::rename(&tmp, &path)?;
        eprintln!("cached: false ({})", path.display());
        Ok(text)
    }
}
