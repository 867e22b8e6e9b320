//! JSON persistence of computed invariants.
//!
//! Schema: `{"version":1,"entries":[{"d":..,"k":[..],"alpha":[..],
//! "beta":[..],"N":"p/q","tilde":"p/q","method":".."}]}`. Loading merges
//! into the engine and never overwrites: a conflicting value for a known key
//! is an integrity error, as is a `tilde` field inconsistent with `N`.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use psifloor::arith::{parse_rational, IntSeq, SeqBase};
use psifloor::recursion::{n_to_tilde, InvariantKey};

use crate::runner::{Engine, Method};

pub const CACHE_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CacheFile {
    pub version: u32,
    pub entries: Vec<CacheEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CacheEntry {
    pub d: u32,
    pub k: Vec<u64>,
    pub alpha: Vec<u64>,
    pub beta: Vec<u64>,
    #[serde(rename = "N")]
    pub n: String,
    pub tilde: String,
    pub method: String,
}

#[derive(Debug)]
pub enum CacheError {
    Io(std::io::Error),
    Parse(String),
    Integrity(String),
}

impl fmt::Display for CacheError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CacheError::Io(e) => write!(f, "cache io error: {e}"),
            CacheError::Parse(m) => write!(f, "cache parse error: {m}"),
            CacheError::Integrity(m) => write!(f, "cache integrity error: {m}"),
        }
    }
}

impl std::error::Error for CacheError {}

impl From<std::io::Error> for CacheError {
    fn from(e: std::io::Error) -> Self {
        CacheError::Io(e)
    }
}

fn method_of(text: &str) -> Result<Method, CacheError> {
    match text {
        "enumeration" => Ok(Method::Floor),
        "recursion" => Ok(Method::Recursion),
        "both" => Ok(Method::Both),
        other => Err(CacheError::Parse(format!("unknown method {other:?}"))),
    }
}

/// Serializes every memoized invariant of the engine.
pub fn snapshot(engine: &Engine) -> CacheFile {
    let entries = engine
        .evaluator
        .n_cache()
        .map(|(key, value)| {
            let tilde = n_to_tilde(value, &key.psi, &key.beta);
            CacheEntry {
                d: key.degree,
                k: key.psi.entries().to_vec(),
                alpha: key.alpha.entries().to_vec(),
                beta: key.beta.entries().to_vec(),
                n: value.to_string(),
                tilde: tilde.to_string(),
                method: engine.method_of(key).to_string(),
            }
        })
        .collect();
    CacheFile { version: CACHE_VERSION, entries }
}

pub fn save(engine: &Engine, path: &Path) -> Result<(), CacheError> {
    let file = snapshot(engine);
    let text = serde_json::to_string_pretty(&file)
        .map_err(|e| CacheError::Parse(e.to_string()))?;
    std::fs::write(path, text)?;
    Ok(())
}

/// Merges a cache file into the engine. An empty file is a no-op.
pub fn load(engine: &mut Engine, path: &Path) -> Result<usize, CacheError> {
    let text = std::fs::read_to_string(path)?;
    if text.trim().is_empty() {
        return Ok(0);
    }
    let file: CacheFile =
        serde_json::from_str(&text).map_err(|e| CacheError::Parse(e.to_string()))?;
    if file.version != CACHE_VERSION {
        return Err(CacheError::Parse(format!("unsupported cache version {}", file.version)));
    }
    let mut merged = 0;
    for entry in &file.entries {
        let key = InvariantKey::new(
            entry.d,
            IntSeq::new(SeqBase::Zero, &entry.k),
            IntSeq::new(SeqBase::One, &entry.alpha),
            IntSeq::new(SeqBase::One, &entry.beta),
        )
        .map_err(|e| CacheError::Parse(format!("invalid key in cache: {e}")))?;
        let n = parse_rational(&entry.n)
            .ok_or_else(|| CacheError::Parse(format!("bad rational {:?}", entry.n)))?;
        let tilde = parse_rational(&entry.tilde)
            .ok_or_else(|| CacheError::Parse(format!("bad rational {:?}", entry.tilde)))?;
        if n_to_tilde(&n, &key.psi, &key.beta) != tilde {
            return Err(CacheError::Integrity(format!(
                "entry {key}: tilde {} does not match N {}",
                entry.tilde, entry.n
            )));
        }
        let method = method_of(&entry.method)?;
        if let Err(existing) = engine.evaluator.seed_n(key.clone(), n) {
            return Err(CacheError::Integrity(format!(
                "entry {key}: cached N {} conflicts with known value {existing}",
                entry.n
            )));
        }
        engine.set_method(key, method);
        merged += 1;
    }
    Ok(merged)
}
