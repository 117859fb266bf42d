//! Plain-text cache of field moduli.
//!
//! One line per field: `p m enc`, where `enc` is the encoding of the
//! non-leading modulus coefficients. Lines are kept sorted by `(p, m)`.
//! Missing entries are regenerated deterministically.

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::Path;

use super::field::FieldCtx;
use super::GfError;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ModulusCache {
    entries: BTreeMap<(u32, u32), u64>,
}

impl ModulusCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// Reads a cache file; a missing file yields an empty cache.
    pub fn load(path: &Path) -> Result<Self, GfError> {
        match fs::read_to_string(path) {
            Ok(text) => Self::parse(&text),
            Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(Self::new()),
            Err(e) => Err(GfError::Cache(e.to_string())),
        }
    }

    pub fn parse(text: &str) -> Result<Self, GfError> {
        let mut entries = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let parsed = match fields.as_slice() {
                [p, m, enc] => p.parse().ok().zip(m.parse().ok()).zip(enc.parse().ok()),
                _ => None,
            };
            let ((p, m), enc) = parsed.ok_or_else(|| {
                GfError::Cache(format!("line {}: expected `p m enc`", lineno + 1))
            })?;
            entries.insert((p, m), enc);
        }
        Ok(ModulusCache { entries })
    }

    pub fn render(&self) -> String {
        self.entries
            .iter()
            .map(|((p, m), enc)| format!("{p} {m} {enc}\n"))
            .collect()
    }

    pub fn save(&self, path: &Path) -> Result<(), GfError> {
        fs::write(path, self.render()).map_err(|e| GfError::Cache(e.to_string()))
    }

    pub fn get(&self, p: u32, m: u32) -> Option<u64> {
        self.entries.get(&(p, m)).copied()
    }

    /// Builds the field, preferring a cached modulus and recording a freshly
    /// computed one.
    pub fn field(&mut self, p: u32, m: u32, bound: u64) -> Result<FieldCtx, GfError> {
        if let Some(enc) = self.get(p, m) {
            return FieldCtx::with_modulus_encoding(p, m, enc, bound);
        }
        let f = FieldCtx::with_bound(p, m, bound)?;
        self.entries.insert((p, m), f.modulus_encoding());
        Ok(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::DEFAULT_SIZE_BOUND;

    #[test]
    fn regenerates_and_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("moduli.txt");
        let mut cache = ModulusCache::load(&path).unwrap();
        assert_eq!(cache, ModulusCache::new());
        let f9 = cache.field(3, 2, DEFAULT_SIZE_BOUND).unwrap();
        let f16 = cache.field(2, 4, DEFAULT_SIZE_BOUND).unwrap();
        cache.save(&path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(
            text,
            format!(
                "2 4 {}\n3 2 {}\n",
                f16.modulus_encoding(),
                f9.modulus_encoding()
            )
        );
        let mut again = ModulusCache::load(&path).unwrap();
        assert_eq!(again.field(3, 2, DEFAULT_SIZE_BOUND).unwrap(), f9);
    }

    #[test]
    fn rejects_garbage() {
        assert!(ModulusCache::parse("3 2").is_err());
        assert!(ModulusCache::parse("# comment\n\n3 2 5\n").is_ok());
        let mut bad = ModulusCache::parse("2 4 1\n").unwrap();
        assert!(matches!(
            bad.field(2, 4, DEFAULT_SIZE_BOUND),
            Err(GfError::BadModulus { .. })
        ));
    }
}
