//! Reliability of complete graphs from the recurrence
//! `r_1 = 1`, `r_n = 1 - Σ_{k=1}^{n-1} C(n-1, k-1) q^{k(n-k)} r_k`,
//! memoised in memory and optionally persisted as versioned JSON.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, RwLock};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::rational::{binomial, int};
use crate::poly::{to_spanning_form, Polynomial, Rational, SpanningForm};

pub const DEFAULT_MAX_N: usize = 64;
pub const CACHE_VERSION: u32 = 1;
/// Environment variable overriding the cache file location used by the CLI.
pub const CACHE_ENV: &str = "RELPOLY_CACHE";

pub fn edge_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Memo of `r_n`. Reads are shared; a missing entry is computed under a single lock so
/// only one worker fills it.
#[derive(Debug)]
pub struct CompleteCache {
    entries: RwLock<BTreeMap<usize, Arc<Polynomial>>>,
    compute: Mutex<()>,
    source_path: Option<PathBuf>,
    max_n: usize,
}

impl Default for CompleteCache {
    fn default() -> Self {
        Self::new()
    }
}

#[derive(Serialize, Deserialize)]
struct CacheFile {
    version: u32,
    entries: BTreeMap<String, Polynomial>,
}

impl CompleteCache {
    pub fn new() -> Self {
        Self::with_max_n(DEFAULT_MAX_N)
    }

    pub fn with_max_n(max_n: usize) -> Self {
        CompleteCache { entries: RwLock::default(), compute: Mutex::new(()), source_path: None, max_n }
    }

    pub fn max_n(&self) -> usize {
        self.max_n
    }

    pub fn source_path(&self) -> Option<&Path> {
        self.source_path.as_deref()
    }

    pub fn len(&self) -> usize {
        self.entries.read().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Snapshot of the cached entries in increasing `n`.
    pub fn entries(&self) -> Vec<(usize, Arc<Polynomial>)> {
        self.entries.read().expect("cache lock").iter().map(|(n, p)| (*n, p.clone())).collect()
    }

    pub fn clear(&self) {
        self.entries.write().expect("cache lock").clear();
    }

    /// `r_n`, computed on first use.
    pub fn reliability(&self, n: usize) -> Result<Arc<Polynomial>> {
        if n == 0 {
            return Err(Error::Precondition("K_n needs n >= 1".into()));
        }
        if n > self.max_n {
            return Err(Error::CompleteTooLarge { n, max: self.max_n });
        }
        if let Some(p) = self.entries.read().expect("cache lock").get(&n) {
            return Ok(p.clone());
        }
        let _guard = self.compute.lock().expect("compute lock");
        let mut known: Vec<Arc<Polynomial>> = Vec::with_capacity(n);
        for k in 1..=n {
            let cached = self.entries.read().expect("cache lock").get(&k).cloned();
            let r = match cached {
                Some(p) => p,
                None => {
                    let p = Arc::new(recurrence_step(k, &known));
                    self.entries.write().expect("cache lock").insert(k, p.clone());
                    p
                }
            };
            known.push(r);
        }
        Ok(known.pop().expect("n >= 1"))
    }

    /// Loads a cache file; a missing file yields an empty cache bound to that path. Every
    /// entry is re-validated before it is accepted.
    pub fn load(path: &Path) -> Result<Self> {
        let mut cache = Self::new();
        cache.source_path = Some(path.to_path_buf());
        let text = match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(cache),
            Err(source) => return Err(Error::Io { path: path.to_path_buf(), source }),
        };
        let file: CacheFile = serde_json::from_str(&text)?;
        if file.version != CACHE_VERSION {
            return Err(Error::CacheCorrupt {
                n: "*".into(),
                reason: format!("unsupported cache version {}", file.version),
            });
        }
        let mut entries = BTreeMap::new();
        for (key, poly) in file.entries {
            let n: usize = key
                .parse()
                .map_err(|_| Error::CacheCorrupt { n: key.clone(), reason: "key is not an integer".into() })?;
            validate_entry(n, &poly)?;
            if n > cache.max_n {
                cache.max_n = n;
            }
            entries.insert(n, Arc::new(poly));
        }
        cache.entries = RwLock::new(entries);
        Ok(cache)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let file = CacheFile {
            version: CACHE_VERSION,
            entries: self
                .entries
                .read()
                .expect("cache lock")
                .iter()
                .map(|(n, p)| (n.to_string(), (**p).clone()))
                .collect(),
        };
        let text = serde_json::to_string(&file)?;
        std::fs::write(path, text).map_err(|source| Error::Io { path: path.to_path_buf(), source })
    }
}

fn recurrence_step(n: usize, known: &[Arc<Polynomial>]) -> Polynomial {
    if n == 1 {
        return Polynomial::one();
    }
    let mut sum = Polynomial::zero();
    for k in 1..n {
        let c = Rational::from_integer(binomial((n - 1) as u64, (k - 1) as u64));
        sum = &sum + &known[k - 1].shift(k * (n - k)).scale(&c);
    }
    &Polynomial::one() - &sum
}

fn validate_entry(n: usize, p: &Polynomial) -> Result<()> {
    let bad = |reason: String| Error::CacheCorrupt { n: n.to_string(), reason };
    if n == 0 {
        return Err(bad("n must be positive".into()));
    }
    if n == 1 {
        return if *p == Polynomial::one() { Ok(()) } else { Err(bad("r_1 must be 1".into())) };
    }
    if p.degree() != Some(edge_count(n)) {
        return Err(bad(format!("degree {:?}, expected {}", p.degree(), edge_count(n))));
    }
    if !p.eval(&int(0)).is_one() {
        return Err(bad("r_n(0) != 1".into()));
    }
    if !p.eval(&int(1)).is_zero() {
        return Err(bad("r_n(1) != 0".into()));
    }
    if !p.is_integral() {
        return Err(bad("non-integer coefficient".into()));
    }
    Ok(())
}

/// `r_n`, the reliability polynomial of `K_n`.
pub fn reliability_complete(n: usize, cache: &CompleteCache) -> Result<Arc<Polynomial>> {
    cache.reliability(n)
}

/// Spanning-subgraph counts of `K_n` over `m = C(n, 2)` edges.
pub fn spanning_counts_complete(n: usize, cache: &CompleteCache) -> Result<SpanningForm> {
    if n < 2 {
        return Err(Error::Precondition("spanning counts of K_n need n >= 2".into()));
    }
    let r = cache.reliability(n)?;
    to_spanning_form(&r, edge_count(n))
}
