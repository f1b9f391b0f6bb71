//! On-disk memo table for the condensation engine.
//!
//! When `DOUGLAS_CACHE_DIR` is set, counts are read from and written back to
//! `condense-memo.json` in that directory.

use std::fs;
use std::io;
use std::path::PathBuf;

use douglas_core::{BigUint, Condenser, RegionSpec};
use serde::{Deserialize, Serialize};

pub const CACHE_ENV: &str = "DOUGLAS_CACHE_DIR";
const FILE_NAME: &str = "condense-memo.json";

#[derive(Serialize, Deserialize)]
struct Entry {
    a: u32,
    d: Vec<u32>,
    count: String,
}

fn cache_file() -> Option<PathBuf> {
    std::env::var_os(CACHE_ENV).map(|dir| PathBuf::from(dir).join(FILE_NAME))
}

/// A condenser seeded from the cache, if one is configured and readable.
/// Unreadable or malformed cache files are ignored.
pub fn load() -> Condenser {
    let Some(path) = cache_file() else {
        return Condenser::new();
    };
    let Ok(text) = fs::read_to_string(path) else {
        return Condenser::new();
    };
    let entries: Vec<Entry> = serde_json::from_str(&text).unwrap_or_default();
    Condenser::with_entries(entries.into_iter().filter_map(|e| {
        let count = e.count.parse::<BigUint>().ok()?;
        Some((RegionSpec::new(e.a, e.d), count))
    }))
}

pub fn store(engine: &Condenser) -> io::Result<()> {
    let Some(path) = cache_file() else {
        return Ok(());
    };
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    let entries: Vec<Entry> = engine
        .entries()
        .into_iter()
        .map(|(s, m)| Entry {
            a: s.a,
            d: s.d,
            count: m.to_string(),
        })
        .collect();
    let tmp = path.with_extension("json.tmp");
    fs::write(&tmp, serde_json::to_string(&entries)?)?;
    fs::rename(tmp, path)
}
