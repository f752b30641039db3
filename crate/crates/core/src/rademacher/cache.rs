use std::collections::HashMap;
use std::fmt;
use std::fs;
use std::io::Write as _;
use std::path::Path;
use std::str::FromStr;
use std::sync::{OnceLock, RwLock};

use num_complex::Complex64;

use crate::{Error, Result};

/// Name of the persisted cache file inside a cache directory.
pub const CACHE_FILE_NAME: &str = "kloosterman.csv";

/// Which group the multiplier sum belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    /// All moduli `c ≥ 1`.
    FullGamma1,
    /// Even moduli only.
    Gamma0Two,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::FullGamma1 => "full_gamma1",
            Family::Gamma0Two => "gamma0_2",
        })
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full_gamma1" => Ok(Family::FullGamma1),
            "gamma0_2" => Ok(Family::Gamma0Two),
            other => Err(Error::UnknownName(other.to_string())),
        }
    }
}

/// Cache key; `n_mod_c ∈ [0, c)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KloostermanKey {
    pub family: Family,
    pub c: u64,
    pub n_mod_c: u64,
}

impl KloostermanKey {
    /// Normalizes `n` into `[0, c)`. Rejects odd `c` for [`Family::Gamma0Two`].
    pub fn new(family: Family, n: i64, c: u64) -> Result<Self> {
        if c == 0 {
            return Err(Error::InvalidInput("modulus c must be positive".into()));
        }
        if family == Family::Gamma0Two && c % 2 == 1 {
            return Err(Error::ParityViolation(c));
        }
        Ok(KloostermanKey {
            family,
            c,
            n_mod_c: n.rem_euclid(c as i64) as u64,
        })
    }
}

/// Thread-safe memo of multiplier sums. Values for a key are deterministic,
/// so concurrent inserts of the same key are harmless.
#[derive(Debug, Default)]
pub struct KloostermanCache {
    map: RwLock<HashMap<KloostermanKey, Complex64>>,
}

impl KloostermanCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// The process-wide cache used by [`super::kloosterman`].
    pub fn global() -> &'static KloostermanCache {
        static GLOBAL: OnceLock<KloostermanCache> = OnceLock::new();
        GLOBAL.get_or_init(KloostermanCache::new)
    }

    pub fn lookup(&self, key: &KloostermanKey) -> Option<Complex64> {
        self.map.read().ok()?.get(key).copied()
    }

    pub fn insert(&self, key: KloostermanKey, value: Complex64) {
        if let Ok(mut map) = self.map.write() {
            map.insert(key, value);
        }
    }

    pub fn len(&self) -> usize {
        self.map.read().map(|m| m.len()).unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn clear(&self) {
        if let Ok(mut map) = self.map.write() {
            map.clear();
        }
    }

    /// Records sorted by key, one per line: `family,c,n_mod_c,re,im`.
    pub fn to_records(&self) -> String {
        let mut entries: Vec<(KloostermanKey, Complex64)> = match self.map.read() {
            Ok(map) => map.iter().map(|(k, v)| (*k, *v)).collect(),
            Err(_) => Vec::new(),
        };
        entries.sort_by_key(|(k, _)| *k);
        let mut out = String::new();
        for (k, v) in entries {
            // `Display` for f64 is the shortest string that round-trips.
            out.push_str(&format!("{},{},{},{},{}\n", k.family, k.c, k.n_mod_c, v.re, v.im));
        }
        out
    }

    /// Merges records in the persisted format; returns how many were read.
    pub fn merge_records(&self, text: &str) -> Result<usize> {
        let mut parsed = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            parsed.push(parse_record(line).map_err(|reason| Error::CacheCorrupt { line: i + 1, reason })?);
        }
        let count = parsed.len();
        for (k, v) in parsed {
            self.insert(k, v);
        }
        Ok(count)
    }

    /// Loads `dir/kloosterman.csv` if it exists.
    pub fn load(&self, dir: &Path) -> Result<usize> {
        let path = dir.join(CACHE_FILE_NAME);
        match fs::read_to_string(&path) {
            Ok(text) => self.merge_records(&text),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(0),
            Err(e) => Err(Error::InvalidInput(format!("reading {}: {e}", path.display()))),
        }
    }

    /// Writes all records to `dir/kloosterman.csv`, creating `dir`.
    pub fn save(&self, dir: &Path) -> Result<()> {
        let io = |e: std::io::Error| Error::InvalidInput(format!("writing cache in {}: {e}", dir.display()));
        fs::create_dir_all(dir).map_err(io)?;
        let mut file = fs::File::create(dir.join(CACHE_FILE_NAME)).map_err(io)?;
        file.write_all(self.to_records().as_bytes()).map_err(io)
    }
}

fn parse_record(line: &str) -> std::result::Result<(KloostermanKey, Complex64), String> {
    let fields: Vec<&str> = line.trim().split(',').collect();
    let [family, c, n, re, im] = fields.as_slice() else {
        return Err(format!("expected 5 fields, found {}", fields.len()));
    };
    let family: Family = family.parse().map_err(|e: Error| e.to_string())?;
    let c: u64 = c.parse().map_err(|e| format!("c: {e}"))?;
    let n: u64 = n.parse().map_err(|e| format!("n_mod_c: {e}"))?;
    let re: f64 = re.parse().map_err(|e| format!("re: {e}"))?;
    let im: f64 = im.parse().map_err(|e| format!("im: {e}"))?;
    if c == 0 || n >= c {
        return Err(format!("n_mod_c = {n} is not in [0, {c})"));
    }
    if family == Family::Gamma0Two && c % 2 == 1 {
        return Err(format!("odd modulus {c} for gamma0_2"));
    }
    Ok((KloostermanKey { family, c, n_mod_c: n }, Complex64::new(re, im)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lookup_contract() {
        let cache = KloostermanCache::new();
        let key = KloostermanKey::new(Family::FullGamma1, 3, 7).unwrap();
        assert_eq!(cache.lookup(&key), None);
        let v = Complex64::new(-1.234_567_890_123_456_7, 3e-17);
        cache.insert(key, v);
        assert_eq!(cache.lookup(&key), Some(v));
        let wrapped = KloostermanKey::new(Family::FullGamma1, 10, 7).unwrap();
        assert_eq!(cache.lookup(&wrapped), Some(v));
        let negative = KloostermanKey::new(Family::FullGamma1, -4, 7).unwrap();
        assert_eq!(negative, key);
        assert_eq!(
            KloostermanKey::new(Family::Gamma0Two, 1, 3),
            Err(Error::ParityViolation(3))
        );
    }

    #[test]
    fn persistence_round_trip_is_bit_exact() {
        let dir = std::env::temp_dir().join(format!("mockforms-cache-test-{}", std::process::id()));
        let cache = KloostermanCache::new();
        let values = [0.1 + 0.2, -1.0 / 3.0, 1e-300, 123456.78901234567];
        for (i, &x) in values.iter().enumerate() {
            let key = KloostermanKey::new(Family::Gamma0Two, i as i64, 8).unwrap();
            cache.insert(key, Complex64::new(x, -x / 7.0));
        }
        cache.save(&dir).unwrap();
        let fresh = KloostermanCache::new();
        assert_eq!(fresh.load(&dir).unwrap(), values.len());
        for (i, &x) in values.iter().enumerate() {
            let key = KloostermanKey::new(Family::Gamma0Two, i as i64, 8).unwrap();
            let got = fresh.lookup(&key).unwrap();
            assert_eq!(got.re.to_bits(), x.to_bits());
            assert_eq!(got.im.to_bits(), (-x / 7.0).to_bits());
        }
        fs::remove_dir_all(&dir).unwrap();
        assert_eq!(KloostermanCache::new().load(&dir).unwrap(), 0);
    }

    #[test]
    fn corrupt_records_are_reported() {
        let cache = KloostermanCache::new();
        let bad = "full_gamma1,3,1,0.5,0\nfull_gamma1,3,x,0.5,0\n";
        assert!(matches!(cache.merge_records(bad), Err(Error::CacheCorrupt { line: 2, .. })));
        assert!(matches!(cache.merge_records("gamma0_2,3,1,0,0"), Err(Error::CacheCorrupt { line: 1, .. })));
        assert!(matches!(cache.merge_records("full_gamma1,3,3,0,0"), Err(Error::CacheCorrupt { .. })));
        assert!(matches!(cache.merge_records("a,b"), Err(Error::CacheCorrupt { .. })));
        assert!(cache.is_empty());
    }
}
