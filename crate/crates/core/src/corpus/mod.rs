//! Coded corpora: documents of shorthand records, pre-processing of raw
//! prose, statistics, the JSON interchange format and the corpus manifest.

mod interchange;
mod manifest;
mod preprocess;
mod stats;

use std::io;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::model::InstitutionalStatement;
use crate::notation::{parse_document, Document, SourceRecord};

pub use interchange::{export, import, InterchangeError, SCHEMA};
pub use manifest::{CorpusManifest, ManifestError};
pub use preprocess::{preprocess, strip_markers};
pub use stats::{stats, FrequencyTable};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Corpus {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<String>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub notes: String,
    pub documents: Vec<Document>,
}

impl Corpus {
    /// Parses `(path, text)` sources. Documents are parsed concurrently when
    /// the `parallel` feature is on; output order follows input order.
    pub fn from_sources(sources: Vec<(String, String)>) -> Corpus {
        let parse = |(path, text): (String, String)| Document { records: parse_document(&text), path };
        #[cfg(feature = "parallel")]
        let documents = {
            use rayon::prelude::*;
            sources.into_par_iter().map(parse).collect()
        };
        #[cfg(not(feature = "parallel"))]
        let documents = sources.into_iter().map(parse).collect();
        Corpus { documents, ..Corpus::default() }
    }

    pub fn load_files<P: AsRef<Path>>(paths: &[P]) -> io::Result<Corpus> {
        let mut sources = Vec::new();
        for p in paths {
            let p = p.as_ref();
            let text = std::fs::read_to_string(p).map_err(|e| io::Error::new(e.kind(), format!("{}: {e}", p.display())))?;
            sources.push((p.display().to_string(), text));
        }
        Ok(Corpus::from_sources(sources))
    }

    pub fn records(&self) -> impl Iterator<Item = &SourceRecord> {
        self.documents.iter().flat_map(|d| d.records.iter())
    }

    /// Successfully parsed statements in document order.
    pub fn statements(&self) -> impl Iterator<Item = &InstitutionalStatement> {
        self.records().filter_map(|r| r.parsed.as_ref())
    }

    pub fn has_parse_errors(&self) -> bool {
        self.records().any(SourceRecord::has_errors)
    }
}
