//! Result persistence. Every artifact is rendered from canonically ordered
//! data, so identical inputs give byte-identical files.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use trinoperm_core::gf::ModulusCache;
use trinoperm_core::{FieldCtx, QuadExtCtx};

use crate::config::FieldSpec;
use crate::error::CliError;

pub const MANIFEST_FILE: &str = "manifest.json";
pub const MODULI_FILE: &str = "moduli.txt";
pub const SCHEMA_VERSION: u32 = 1;

/// Modulus encodings of a base field and of its quadratic extension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ModulusRecord {
    pub p: u32,
    pub m: u32,
    pub q: u32,
    pub modulus: u64,
    /// `w^2 = d` (odd q) or `w^2 + w = d` (even q).
    pub extension_constant: u32,
}

impl ModulusRecord {
    pub fn of(ext: &QuadExtCtx) -> Self {
        let f = ext.base();
        ModulusRecord {
            p: f.p(),
            m: f.m(),
            q: f.q(),
            modulus: f.modulus_encoding(),
            extension_constant: ext.d().enc(),
        }
    }

    pub fn csv_comment(&self) -> String {
        format!(
            "field p={} m={} q={} modulus={} extension-constant={}",
            self.p, self.m, self.q, self.modulus, self.extension_constant
        )
    }
}

/// Fields built through the on-disk modulus cache.
#[derive(Debug)]
pub struct FieldFactory {
    cache: ModulusCache,
    bound: u64,
}

impl FieldFactory {
    pub fn new(cache: ModulusCache, bound: u64) -> Self {
        FieldFactory { cache, bound }
    }

    pub fn base(&mut self, spec: FieldSpec) -> Result<FieldCtx, CliError> {
        Ok(self.cache.field(spec.p, spec.m, self.bound)?)
    }

    pub fn ext(&mut self, spec: FieldSpec) -> Result<QuadExtCtx, CliError> {
        Ok(QuadExtCtx::new(self.base(spec)?)?)
    }

    /// The flat field F_{p^k}.
    pub fn flat(&mut self, p: u32, k: u32) -> Result<FieldCtx, CliError> {
        Ok(self.cache.field(p, k, self.bound)?)
    }

    pub fn cache(&self) -> &ModulusCache {
        &self.cache
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArtifactEntry {
    pub command: String,
    pub fields: Vec<ModulusRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub schema: u32,
    pub artifacts: BTreeMap<String, ArtifactEntry>,
}

impl Default for Manifest {
    fn default() -> Self {
        Manifest {
            tool: "trinoperm".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            schema: SCHEMA_VERSION,
            artifacts: BTreeMap::new(),
        }
    }
}

/// A results directory plus its manifest.
#[derive(Debug)]
pub struct ResultsDir {
    root: PathBuf,
    manifest: Manifest,
}

impl ResultsDir {
    pub fn open(root: &Path) -> Result<Self, CliError> {
        fs::create_dir_all(root).map_err(|e| CliError::io(root, e))?;
        let path = root.join(MANIFEST_FILE);
        let manifest = match fs::read_to_string(&path) {
            Ok(text) => serde_json::from_str(&text).unwrap_or_default(),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Manifest::default(),
            Err(e) => return Err(CliError::io(path, e)),
        };
        Ok(ResultsDir {
            root: root.to_path_buf(),
            manifest,
        })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn factory(&self, bound: u64) -> Result<FieldFactory, CliError> {
        let cache = ModulusCache::load(&self.root.join(MODULI_FILE))?;
        Ok(FieldFactory::new(cache, bound))
    }

    pub fn save_cache(&self, factory: &FieldFactory) -> Result<(), CliError> {
        let path = self.root.join(MODULI_FILE);
        fs::write(&path, factory.cache().render()).map_err(|e| CliError::io(path, e))
    }

    fn write(&mut self, rel: &str, text: &str, entry: ArtifactEntry) -> Result<PathBuf, CliError> {
        let path = self.root.join(rel);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).map_err(|e| CliError::io(parent, e))?;
        }
        fs::write(&path, text).map_err(|e| CliError::io(&path, e))?;
        self.manifest.artifacts.insert(rel.to_string(), entry);
        Ok(path)
    }

    pub fn write_json<T: Serialize>(
        &mut self,
        rel: &str,
        value: &T,
        entry: ArtifactEntry,
    ) -> Result<PathBuf, CliError> {
        let text = to_json(value);
        self.write(rel, &text, entry)
    }

    pub fn write_text(
        &mut self,
        rel: &str,
        text: &str,
        entry: ArtifactEntry,
    ) -> Result<PathBuf, CliError> {
        self.write(rel, text, entry)
    }

    pub fn finish(self, factory: &FieldFactory) -> Result<(), CliError> {
        self.save_cache(factory)?;
        let path = self.root.join(MANIFEST_FILE);
        fs::write(&path, to_json(&self.manifest)).map_err(|e| CliError::io(path, e))
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("report types serialize");
    text.push('\n');
    text
}

/// A CSV table whose first line names the schema and version.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CsvTable {
    pub schema: &'static str,
    pub comments: Vec<String>,
    pub columns: &'static [&'static str],
    pub rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn render(&self) -> String {
        let mut out = format!("# trinoperm {} v{}\n", self.schema, SCHEMA_VERSION);
        for c in &self.comments {
            out.push_str("# ");
            out.push_str(c);
            out.push('\n');
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}
