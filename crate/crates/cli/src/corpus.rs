use std::path::{Path, PathBuf};

use anyhow::{bail, Context as _, Result};
use serde::Deserialize;

/// Expected results stored next to an algebra file as `<stem>.toml`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sidecar {
    pub label: String,
    /// Table row this algebra belongs to; absent for algebras outside the tables.
    pub row: Option<String>,
    #[serde(default)]
    pub table: Vec<TableRow>,
    #[serde(default)]
    pub instance: Vec<Instance>,
    pub flat: Option<Flat>,
    #[serde(default)]
    pub zhang: Vec<ZhangCase>,
}

/// Provenance of a sidecar value: `published` values come from the tables of
/// good tuples, `derived` ones were computed independently.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Published,
    Derived,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableRow {
    /// 1-based omitted index.
    pub k: usize,
    /// The entries mention a free nonzero scalar `lambda`.
    #[serde(default)]
    pub lambda: bool,
    pub entries: Vec<String>,
    pub source: Source,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Instance {
    pub k: usize,
    pub p: String,
    pub assign: Option<String>,
    pub good: bool,
    pub hilbert_a: Option<Vec<usize>>,
    pub hilbert_d: Option<Vec<usize>>,
    pub source: Source,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Flat {
    pub points: Vec<String>,
    pub tables: Option<Vec<usize>>,
    pub source: Source,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZhangCase {
    pub k: usize,
    pub p: String,
    pub sigma: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct Entry {
    pub alg: PathBuf,
    pub sidecar: Sidecar,
}

pub fn read_sidecar(alg: &Path) -> Result<Sidecar> {
    let path = alg.with_extension("toml");
    if !path.exists() {
        bail!("missing sidecar {}", path.display());
    }
    let text = std::fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
    toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

/// Every `*.alg` in the directory, sorted by file name, with its sidecar.
pub fn entries(dir: &Path) -> Result<Vec<Entry>> {
    let mut algs: Vec<PathBuf> = std::fs::read_dir(dir)
        .with_context(|| format!("reading {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "alg"))
        .collect();
    algs.sort();
    if algs.is_empty() {
        bail!("no .alg files in {}", dir.display());
    }
    algs.into_iter().map(|alg| Ok(Entry { sidecar: read_sidecar(&alg)?, alg })).collect()
}
