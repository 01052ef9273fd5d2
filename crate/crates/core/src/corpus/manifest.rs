use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::profile::{Profile, ProfileError};
use crate::taxonomy::{TaxonomyError, TaxonomyRegistry};

use super::Corpus;

/// `igkit.toml`: flat keys, paths relative to the manifest.
///
/// ```toml
/// name = "organic-farming"
/// profile = "IG Core+C_Ext"
/// taxonomies = ["local.toml"]
/// documents = ["rules.ig"]
/// notes = "objects coded without properties"
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusManifest {
    pub name: String,
    pub profile: String,
    #[serde(default)]
    pub taxonomies: Vec<PathBuf>,
    pub documents: Vec<PathBuf>,
    #[serde(default)]
    pub notes: String,
    #[serde(skip)]
    pub base: PathBuf,
}

#[derive(Debug, Error)]
pub enum ManifestError {
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("manifest: {0}")]
    Format(String),
    #[error("manifest profile: {0}")]
    Profile(#[from] ProfileError),
    #[error("manifest taxonomy: {0}")]
    Taxonomy(#[from] TaxonomyError),
    #[error("manifest lists `{0}`, which does not exist")]
    MissingPath(PathBuf),
}

impl CorpusManifest {
    pub fn parse(text: &str, base: &Path) -> Result<Self, ManifestError> {
        let mut m: CorpusManifest = toml::from_str(text).map_err(|e| ManifestError::Format(e.to_string()))?;
        m.base = base.to_path_buf();
        Profile::parse(&m.profile)?;
        for p in m.taxonomies.iter().chain(&m.documents) {
            if !m.base.join(p).exists() {
                return Err(ManifestError::MissingPath(p.clone()));
            }
        }
        Ok(m)
    }

    pub fn load(path: &Path) -> Result<Self, ManifestError> {
        let text = std::fs::read_to_string(path)?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::parse(&text, &base)
    }

    pub fn profile(&self) -> Profile {
        Profile::parse(&self.profile).expect("checked on load")
    }

    /// Built-in taxonomies merged with the listed extension files, in order.
    pub fn registry(&self) -> Result<TaxonomyRegistry, ManifestError> {
        let mut reg = TaxonomyRegistry::builtin();
        for t in &self.taxonomies {
            reg = reg.merge_file(&self.base.join(t))?;
        }
        Ok(reg)
    }

    pub fn load_corpus(&self) -> Result<Corpus, ManifestError> {
        let paths: Vec<PathBuf> = self.documents.iter().map(|d| self.base.join(d)).collect();
        let mut c = Corpus::load_files(&paths)?;
        c.name = Some(self.name.clone());
        c.profile = Some(self.profile.clone());
        c.notes = self.notes.clone();
        Ok(c)
    }
}
