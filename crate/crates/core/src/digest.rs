use std::fs;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::error::{HtgError, Result};

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn file_sha256(path: impl AsRef<Path>) -> Result<String> {
    let path = path.as_ref();
    Ok(sha256_hex(
        &fs::read(path).map_err(|e| HtgError::io(path, e))?,
    ))
}

/// Digest of an id set, independent of order and duplicates.
pub fn id_set_digest<'a>(ids: impl IntoIterator<Item = &'a str>) -> String {
    let mut ids: Vec<&str> = ids.into_iter().collect();
    ids.sort_unstable();
    ids.dedup();
    sha256_hex(ids.join("\n").as_bytes())
}
