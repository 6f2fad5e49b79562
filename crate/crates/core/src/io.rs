//! Group files, corpus manifests and the on-disk character table cache.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::chartab::{install_table, Character, CharacterTable};
use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::group::{Caps, Group};
use crate::perm::Permutation;
use crate::pi::PiSet;

/// Environment variable naming the table cache directory.
pub const CACHE_ENV: &str = "VERTEXLAB_CACHE";

/// A permutation group as stored on disk: generators as 0-based image arrays.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupFile {
    pub name: String,
    pub degree: usize,
    pub generators: Vec<Vec<u32>>,
}

impl GroupFile {
    pub fn from_group(g: &Group) -> GroupFile {
        GroupFile {
            name: g.name().to_string(),
            degree: g.degree(),
            generators: g.generators().iter().map(|&i| g.element(i).images().to_vec()).collect(),
        }
    }

    pub fn build(&self, caps: Caps) -> Result<Arc<Group>> {
        let gens = self
            .generators
            .iter()
            .map(|imgs| {
                if imgs.len() != self.degree {
                    return Err(Error::DegreeMismatch(self.degree, imgs.len()));
                }
                Permutation::from_images(imgs.clone())
            })
            .collect::<Result<Vec<_>>>()?;
        Group::from_generators(&self.name, self.degree, gens, caps)
    }
}

/// Reads a group file and builds the group, using the table cache when configured.
pub fn load_group(path: &Path, caps: Caps) -> Result<Arc<Group>> {
    let text = fs::read_to_string(path).map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?;
    let file: GroupFile = serde_json::from_str(&text)
        .map_err(|e| Error::Input(format!("malformed group file {}: {e}", path.display())))?;
    let g = file.build(caps)?;
    if let Some(cache) = TableCache::from_env() {
        cache.attach(&g)?;
    }
    Ok(g)
}

/// Overrides for the default caps of a corpus entry.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CapsOverride {
    #[serde(default)]
    pub order: Option<usize>,
    #[serde(default)]
    pub subgroups: Option<usize>,
}

impl CapsOverride {
    pub fn apply(&self, base: Caps) -> Caps {
        Caps { order: self.order.unwrap_or(base.order), subgroups: self.subgroups.unwrap_or(base.subgroups) }
    }
}

/// One group of a corpus.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusEntry {
    /// Group file, relative to the manifest.
    pub file: PathBuf,
    /// π-sets in the `2,3` / `3'` syntax; all subsets of the prime divisors when absent.
    #[serde(default)]
    pub pi_sets: Option<Vec<String>>,
    #[serde(default)]
    pub caps: Option<CapsOverride>,
}

impl CorpusEntry {
    pub fn parsed_pi_sets(&self) -> Result<Option<Vec<PiSet>>> {
        self.pi_sets
            .as_ref()
            .map(|v| v.iter().map(|s| s.parse().map_err(Error::Input)).collect::<Result<Vec<_>>>())
            .transpose()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    #[serde(default)]
    pub entries: Vec<CorpusEntry>,
    /// Directory that entry paths are relative to.
    #[serde(skip)]
    pub base: PathBuf,
}

impl Manifest {
    pub fn load(path: &Path) -> Result<Manifest> {
        let text =
            fs::read_to_string(path).map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?;
        let mut m: Manifest = serde_json::from_str(&text)
            .map_err(|e| Error::Input(format!("malformed manifest {}: {e}", path.display())))?;
        m.base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(m)
    }

    pub fn resolve(&self, entry: &CorpusEntry) -> PathBuf {
        self.base.join(&entry.file)
    }
}

#[derive(Serialize, Deserialize)]
struct CachedTable {
    prime: u64,
    rows: Vec<Vec<Cyclotomic>>,
}

/// Directory of character tables keyed by a hash of the group's elements.
#[derive(Clone, Debug)]
pub struct TableCache {
    dir: PathBuf,
}

impl TableCache {
    pub fn new(dir: impl Into<PathBuf>) -> TableCache {
        TableCache { dir: dir.into() }
    }

    pub fn from_env() -> Option<TableCache> {
        std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(TableCache::new)
    }

    pub fn key(g: &Group) -> String {
        let mut h = Sha256::new();
        h.update((g.degree() as u64).to_le_bytes());
        for p in g.elements() {
            for &x in p.images() {
                h.update(x.to_le_bytes());
            }
        }
        hex::encode(h.finalize())
    }

    fn path(&self, g: &Group) -> PathBuf {
        self.dir.join(format!("{}.json", Self::key(g)))
    }

    /// Installs a cached table (after checking orthogonality) or computes
    /// the table and stores it.
    pub fn attach(&self, g: &Arc<Group>) -> Result<()> {
        let path = self.path(g);
        if let Ok(text) = fs::read_to_string(&path) {
            match serde_json::from_str::<CachedTable>(&text) {
                Ok(t) if Self::valid(g, &t) => {
                    log::debug!("table cache hit for {} ({})", g.name(), path.display());
                    install_table(g, t.rows, t.prime);
                    return Ok(());
                }
                _ => log::warn!("ignoring invalid cached table {}", path.display()),
            }
        }
        let table = CharacterTable::of(g);
        let cached = CachedTable { prime: table.prime, rows: table.rows.iter().map(|c| c.values().to_vec()).collect() };
        fs::create_dir_all(&self.dir)?;
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        serde_json::to_writer(&mut tmp, &cached)?;
        tmp.flush()?;
        tmp.persist(&path).map_err(|e| Error::Io(e.error))?;
        log::debug!("stored table for {} in {}", g.name(), path.display());
        Ok(())
    }

    fn valid(g: &Arc<Group>, t: &CachedTable) -> bool {
        let k = g.class_count();
        if t.rows.len() != k || t.rows.iter().any(|r| r.len() != k) {
            return false;
        }
        let rows = t.rows.iter().map(|r| Character::new(g.clone(), r.clone())).collect();
        CharacterTable { group: g.clone(), rows, prime: t.prime }.check_orthogonality().is_ok()
    }
}
