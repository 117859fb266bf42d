//! Run configuration: defaults, optional TOML file, then command-line flags.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use trinoperm_core::gf::{prime::is_prime, DEFAULT_SIZE_BOUND};
use trinoperm_core::gnq::{MiddleTerm, DEFAULT_COEFF_BOUND};

use crate::error::CliError;

pub const RESULTS_ENV: &str = "TRINOPERM_RESULTS";
pub const DEFAULT_RESULTS_DIR: &str = "trinoperm-results";

/// A prime power `p^m`, written `p` or `p^m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct FieldSpec {
    pub p: u32,
    pub m: u32,
}

impl FieldSpec {
    pub fn new(p: u32, m: u32) -> Result<Self, String> {
        if !is_prime(p as u64) {
            return Err(format!("{p} is not prime"));
        }
        if m == 0 {
            return Err("extension degree must be at least 1".into());
        }
        if (p as u64)
            .checked_pow(m)
            .is_none_or(|q| q > u32::MAX as u64)
        {
            return Err(format!("{p}^{m} is too large"));
        }
        Ok(FieldSpec { p, m })
    }

    pub fn q(self) -> u32 {
        self.p.pow(self.m)
    }

    pub fn is_odd(self) -> bool {
        self.p != 2
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.m == 1 {
            write!(f, "{}", self.p)
        } else {
            write!(f, "{}^{}", self.p, self.m)
        }
    }
}

impl FromStr for FieldSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (p, m) = match s.trim().split_once('^') {
            Some((p, m)) => (p, m),
            None => (s.trim(), "1"),
        };
        let p = p.parse().map_err(|_| format!("bad prime in {s:?}"))?;
        let m = m.parse().map_err(|_| format!("bad exponent in {s:?}"))?;
        FieldSpec::new(p, m)
    }
}

impl<'de> Deserialize<'de> for FieldSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Settings shared by every subcommand. Identical configs give identical
/// artifacts regardless of `threads`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    pub fields: Vec<FieldSpec>,
    pub size_bound: u64,
    pub coeff_bound: usize,
    pub results_dir: PathBuf,
    /// Table format; each command has its own default.
    pub format: Option<Format>,
    /// Worker threads; 0 lets the pool decide.
    pub threads: usize,
    pub middle_term: MiddleTerm,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            fields: [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1), (7, 1)]
                .into_iter()
                .map(|(p, m)| FieldSpec { p, m })
                .collect(),
            size_bound: DEFAULT_SIZE_BOUND,
            coeff_bound: DEFAULT_COEFF_BOUND,
            results_dir: PathBuf::from(DEFAULT_RESULTS_DIR),
            format: None,
            threads: 0,
            middle_term: MiddleTerm::default(),
        }
    }
}

/// Partial settings; used for both the config file and the flags.
#[derive(Debug, Clone, Default, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct Overrides {
    pub fields: Option<Vec<FieldSpec>>,
    pub size_bound: Option<u64>,
    pub coeff_bound: Option<usize>,
    pub results_dir: Option<PathBuf>,
    pub format: Option<Format>,
    pub threads: Option<usize>,
    pub middle_term: Option<MiddleTerm>,
}

impl Overrides {
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        toml::from_str(&text).map_err(|e| CliError::Config {
            path: path.to_path_buf(),
            message: e.to_string(),
        })
    }
}

impl RunConfig {
    /// Later layers win.
    pub fn layered<'a>(layers: impl IntoIterator<Item = &'a Overrides>) -> Result<Self, CliError> {
        let mut cfg = RunConfig::default();
        for o in layers {
            cfg.apply(o);
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn apply(&mut self, o: &Overrides) {
        if let Some(v) = &o.fields {
            self.fields = v.clone();
        }
        if let Some(v) = o.size_bound {
            self.size_bound = v;
        }
        if let Some(v) = o.coeff_bound {
            self.coeff_bound = v;
        }
        if let Some(v) = &o.results_dir {
            self.results_dir = v.clone();
        }
        if let Some(v) = o.format {
            self.format = Some(v);
        }
        if let Some(v) = o.threads {
            self.threads = v;
        }
        if let Some(v) = o.middle_term {
            self.middle_term = v;
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.size_bound == 0 || self.coeff_bound == 0 {
            return Err(CliError::Usage("bounds must be positive".into()));
        }
        if self.fields.is_empty() {
            return Err(CliError::Usage("field list is empty".into()));
        }
        for f in &self.fields {
            FieldSpec::new(f.p, f.m).map_err(CliError::Usage)?;
        }
        Ok(())
    }

    /// Sorted, deduplicated field list.
    pub fn canonical_fields(&self) -> Vec<FieldSpec> {
        let mut v = self.fields.clone();
        v.sort();
        v.dedup();
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_prime_powers() {
        assert_eq!(
            "3^2".parse::<FieldSpec>().unwrap(),
            FieldSpec { p: 3, m: 2 }
        );
        assert_eq!("7".parse::<FieldSpec>().unwrap(), FieldSpec { p: 7, m: 1 });
        assert!("6".parse::<FieldSpec>().is_err());
        assert!("3^0".parse::<FieldSpec>().is_err());
    }

    #[test]
    fn flags_win_over_file() {
        let file: Overrides =
            toml::from_str("fields = [\"5\", \"3^2\"]\nthreads = 2\nmiddle-term = \"zero\"\n")
                .unwrap();
        let flags = Overrides {
            threads: Some(4),
            ..Overrides::default()
        };
        let cfg = RunConfig::layered([&file, &flags]).unwrap();
        assert_eq!(cfg.threads, 4);
        assert_eq!(cfg.middle_term, MiddleTerm::Zero);
        assert_eq!(cfg.fields.len(), 2);
    }

    #[test]
    fn rejects_unknown_keys_and_zero_bounds() {
        assert!(toml::from_str::<Overrides>("colour = 1").is_err());
        let o = Overrides {
            size_bound: Some(0),
            ..Overrides::default()
        };
        assert!(RunConfig::layered([&o]).is_err());
    }
}
